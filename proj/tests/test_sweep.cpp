#include "tomo/dtns.hpp"
#include "tomo/manifest.hpp"
#include "tomo/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tomo;
namespace fs = std::filesystem;

namespace {

// Small, fast configuration shared by the tests below.
SweepConfig tiny() {
    SweepConfig cfg;
    cfg.side_px = 32;
    cfg.n_views = 8;
    cfg.n_test = 2;
    cfg.n_calib = 1;
    cfg.photon_grid = {1000};
    cfg.tv_grid = {1e-3, 1e-2};
    cfg.solver.mle.max_iters = 5;
    cfg.scattering.j_scales = 2;
    return cfg;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tomo_sweep_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(AggregateLogStats, Examples) {
    auto s = aggregate_log_stats({4.5});
    EXPECT_EQ(s.mean, 4.5);
    EXPECT_EQ(s.log_std, 0.0);
    s = aggregate_log_stats({10, 1000});
    EXPECT_DOUBLE_EQ(s.mean, 505.0);
    EXPECT_NEAR(s.log_std, std::sqrt(2.0), 1e-12);
    EXPECT_EQ(aggregate_log_stats({0.3, 0.3, 0.3}).log_std, 0.0);
    EXPECT_THROW(aggregate_log_stats({}), std::invalid_argument);
    s = aggregate_log_stats({0.0, 1.0});
    EXPECT_EQ(s.clamped, 1);
    EXPECT_NEAR(s.log_std, std::sqrt(2.0) * 6, 1e-9);  // log10 of {1e-12, 1}
}

TEST(SweepConfig, Validation) {
    auto cfg = tiny();
    EXPECT_NO_THROW(cfg.validate());
    cfg.photon_grid = {100, 32};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.photon_grid = {};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = tiny();
    cfg.photon_grid = {32, 32};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SweepConfig, JsonRoundTrip) {
    auto cfg = tiny();
    cfg.algorithms = {Algorithm::MapTv, Algorithm::Fbp};
    cfg.tv_weights[1000] = 2.5;
    cfg.fbp.window = FbpWindow::Hann;
    cfg.scattering.pooling = ScatteringPooling::Global;
    const auto back = sweep_config_from_json(to_json(cfg));
    EXPECT_EQ(to_json(back), to_json(cfg));
    EXPECT_EQ(back.tv_weights.at(1000), 2.5);
    EXPECT_THROW(sweep_config_from_json({{"algorithms", {"sirt"}}}), std::invalid_argument);
    EXPECT_THROW(sweep_config_from_json({{"photon_grid", {100, 10}}}), std::invalid_argument);
}

TEST(Seeds, DerivedSeedsAreDistinctAndNonzero) {
    EXPECT_NE(derive_seed(0, kTestTag, 0, 32), 0u);
    EXPECT_NE(derive_seed(0, kTestTag, 0, 32), derive_seed(0, kTestTag, 0, 100));
    EXPECT_NE(derive_seed(0, kTestTag, 0, 32), derive_seed(0, kTestTag, 1, 32));
    EXPECT_NE(derive_seed(0, kTestTag, 0, 32), derive_seed(1, kTestTag, 0, 32));
    EXPECT_NE(derive_seed(0, kTestTag, 0, 32), derive_seed(0, kCalibTag, 0, 32));
    const auto cfg = tiny();
    EXPECT_EQ(phantom_seed(cfg, kTestTag, 3), 3u);
    EXPECT_NE(phantom_seed(cfg, kCalibTag, 3), 3u);
}

TEST(RunSweep, RowCountFbpOnly) {
    auto cfg = tiny();
    cfg.algorithms = {Algorithm::Fbp};
    const auto table = run_sweep(cfg);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_EQ(table.rows[0].metric, "one_minus_r");
    EXPECT_EQ(table.rows[1].metric, "scattering_l2");
    for (const auto& row : table.rows) EXPECT_EQ(row.n_samples, 2);
    EXPECT_TRUE(table.tv_weights.empty());
    const auto csv = sweep_csv(table);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "algorithm,n0,metric,mean,log_std,n_samples");
    EXPECT_NE(csv.find("\nfbp,1000,one_minus_r,"), std::string::npos);
}

TEST(RunSweep, AllAlgorithmsDeterministicAcrossThreads) {
    auto cfg = tiny();
    cfg.photon_grid = {100, 1000};
    const auto a = run_sweep(cfg);
    ASSERT_EQ(a.rows.size(), 3u * 2u * 2u);
    EXPECT_EQ(a.tv_weights.size(), 2u);
    EXPECT_TRUE(a.errors.empty());
    cfg.n_threads = 3;
    const auto b = run_sweep(cfg);
    EXPECT_EQ(sweep_csv(a), sweep_csv(b));
    EXPECT_EQ(a.tv_weights, b.tv_weights);
    for (const auto& row : a.rows) {
        EXPECT_GT(row.mean, 0.0);
        EXPECT_EQ(row.n_samples, cfg.n_test);
    }
    // Algorithm-major, then photon level, then metric.
    EXPECT_EQ(a.rows[0].algorithm, Algorithm::Fbp);
    EXPECT_EQ(a.rows[0].n0, 100);
    EXPECT_EQ(a.rows[2].n0, 1000);
    EXPECT_EQ(a.rows[4].algorithm, Algorithm::Mle);
    ASSERT_NE(a.find(Algorithm::MapTv, 1000, "scattering_l2"), nullptr);
}

TEST(RunSweep, FixedWeightsSkipCalibration) {
    auto cfg = tiny();
    cfg.algorithms = {Algorithm::MapTv};
    cfg.tv_weights[1000] = 0.123;
    const auto table = run_sweep(cfg);
    EXPECT_EQ(table.tv_weights.at(1000), 0.123);
}

TEST(SweepSvg, HasOneLinePerAlgorithm) {
    auto cfg = tiny();
    cfg.photon_grid = {100, 1000};
    cfg.algorithms = {Algorithm::Fbp, Algorithm::Mle};
    const auto svg = sweep_svg(run_sweep(cfg), "one_minus_r");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++lines;
    EXPECT_EQ(lines, 2u);
}

TEST(ExportDataset, TrainInventory) {
    auto cfg = tiny();
    cfg.n_test = 4;
    cfg.algorithms = {Algorithm::MapTv};
    const auto dir = scratch_dir("train");
    const auto summary = export_dataset(cfg, Split::Train, dir);
    EXPECT_EQ(summary.n_files, 2u);
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    const auto gt = read_tensor(dir / "ground_truth.dtns");
    EXPECT_EQ(gt.dims, (std::vector<std::uint64_t>{4, 32, 32}));
    EXPECT_EQ(read_tensor(dir / "recon_maptv.dtns").dims, gt.dims);
    const auto m = read_manifest(dir / "manifest.json");
    EXPECT_TRUE(verify_manifest(m, dir).empty());
    EXPECT_EQ(m.config["side_px"], 32);
    EXPECT_EQ(m.extra["split"], "train");

    const auto first = file_bytes(dir / "recon_maptv.dtns");
    export_dataset(cfg, Split::Train, dir);
    EXPECT_EQ(file_bytes(dir / "recon_maptv.dtns"), first);
}

TEST(ExportDataset, TestInventory) {
    auto cfg = tiny();
    cfg.photon_grid = {32, 1000};
    cfg.algorithms = {Algorithm::Fbp, Algorithm::Mle};
    const auto dir = scratch_dir("test");
    export_dataset(cfg, Split::Test, dir);
    const auto m = read_manifest(dir / "manifest.json");
    EXPECT_EQ(m.files.size(), 1u + 2u * 2u);
    EXPECT_TRUE(fs::exists(dir / "recon_fbp_n0_32.dtns"));
    EXPECT_TRUE(fs::exists(dir / "recon_mle_n0_1000.dtns"));
    int with_n0 = 0;
    for (const auto& e : m.files) {
        if (e.role == "recon") {
            ASSERT_TRUE(e.n0.has_value());
            EXPECT_EQ(e.item_seeds.size(), 2u);
            ++with_n0;
        }
    }
    EXPECT_EQ(with_n0, 4);
}
