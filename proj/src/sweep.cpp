#include "tomo/sweep.hpp"

#include "tomo/dtns.hpp"
#include "tomo/manifest.hpp"
#include "tomo/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace tomo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string n0_label(double n0) {
    char buf[64];
    if (n0 == std::floor(n0) && n0 < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", n0);
    } else {
        std::snprintf(buf, sizeof buf, "%g", n0);
    }
    return buf;
}

const char* window_name(FbpWindow w) { return w == FbpWindow::Hann ? "hann" : "ramlak"; }

FbpWindow parse_window(const std::string& s) {
    if (s == "ramlak") return FbpWindow::RamLak;
    if (s == "hann") return FbpWindow::Hann;
    throw std::invalid_argument("unknown FBP window: " + s);
}

bool has_algorithm(const SweepConfig& cfg, Algorithm a) {
    return std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a) != cfg.algorithms.end();
}

ScanGeometry sweep_geometry(const SweepConfig& cfg) {
    return derive_geometry(cfg.side_px, cfg.pixel_size(), cfg.n_views);
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Fbp: return "fbp";
        case Algorithm::Mle: return "mle";
        case Algorithm::MapTv: return "maptv";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "fbp") return Algorithm::Fbp;
    if (lower == "mle") return Algorithm::Mle;
    if (lower == "maptv" || lower == "map-tv" || lower == "map") return Algorithm::MapTv;
    throw std::invalid_argument("unknown algorithm: " + name);
}

void SweepConfig::validate() const {
    if (n_views < 1) throw std::invalid_argument("SweepConfig: n_views must be positive");
    if (side_px < 16) throw std::invalid_argument("SweepConfig: side_px must be >= 16");
    if (!(field_of_view > 0.0)) throw std::invalid_argument("SweepConfig: field_of_view must be positive");
    if (photon_grid.empty()) throw std::invalid_argument("SweepConfig: photon_grid is empty");
    for (std::size_t i = 0; i < photon_grid.size(); ++i) {
        if (!(photon_grid[i] > 0.0)) throw std::invalid_argument("SweepConfig: photon levels must be positive");
        if (i > 0 && !(photon_grid[i] > photon_grid[i - 1])) {
            throw std::invalid_argument("SweepConfig: photon_grid must be strictly increasing");
        }
    }
    if (n_test < 1) throw std::invalid_argument("SweepConfig: n_test must be positive");
    if (algorithms.empty()) throw std::invalid_argument("SweepConfig: no algorithms selected");
    if (n_calib < 1 && has_algorithm(*this, Algorithm::MapTv)) {
        throw std::invalid_argument("SweepConfig: n_calib must be positive when MAP-TV is selected");
    }
    if (tv_grid.empty()) throw std::invalid_argument("SweepConfig: tv_grid is empty");
    if (!(reference_n0 > 0.0)) throw std::invalid_argument("SweepConfig: reference_n0 must be positive");
}

nlohmann::json to_json(const SweepConfig& cfg) {
    nlohmann::json algos = nlohmann::json::array();
    for (auto a : cfg.algorithms) algos.push_back(algorithm_name(a));
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [n0, w] : cfg.tv_weights) weights[n0_label(n0)] = w;
    const auto& mle = cfg.solver.mle;
    return {
        {"n_views", cfg.n_views},
        {"side_px", cfg.side_px},
        {"field_of_view", cfg.field_of_view},
        {"pixel_size", cfg.pixel_size()},
        {"photon_grid", cfg.photon_grid},
        {"n_test", cfg.n_test},
        {"n_calib", cfg.n_calib},
        {"n_ellipses", cfg.n_ellipses},
        {"algorithms", algos},
        {"base_seed", cfg.base_seed},
        {"reference_n0", cfg.reference_n0},
        {"tv_grid", cfg.tv_grid},
        {"tv_weights", weights},
        {"n_threads", cfg.n_threads},
        {"fbp",
         {{"window", window_name(cfg.fbp.window)},
          {"pad_factor", cfg.fbp.pad_factor},
          {"clamp_negative", cfg.fbp.clamp_negative},
          {"floor_counts", cfg.fbp.floor_counts}}},
        {"solver",
         {{"max_iters", mle.max_iters},
          {"armijo", {{"c", mle.armijo.c}, {"shrink", mle.armijo.shrink}, {"max_backtracks", mle.armijo.max_backtracks}}},
          {"init", mle.init == InitKind::Fbp ? "fbp" : "zero"},
          {"grad_tol", mle.grad_tol},
          {"supersample", mle.projector.supersample},
          {"tv_inner_iters", cfg.solver.tv_inner_iters},
          {"fista", cfg.solver.fista}}},
        {"scattering",
         {{"j_scales", cfg.scattering.j_scales},
          {"n_orientations", cfg.scattering.n_orientations},
          {"order", cfg.scattering.order},
          {"pooling", cfg.scattering.pooling == ScatteringPooling::Global ? "global" : "windowed"}}},
    };
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig cfg;
    try {
        cfg.n_views = j.value("n_views", cfg.n_views);
        cfg.side_px = j.value("side_px", cfg.side_px);
        cfg.field_of_view = j.value("field_of_view", cfg.field_of_view);
        cfg.photon_grid = j.value("photon_grid", cfg.photon_grid);
        cfg.n_test = j.value("n_test", cfg.n_test);
        cfg.n_calib = j.value("n_calib", cfg.n_calib);
        cfg.n_ellipses = j.value("n_ellipses", cfg.n_ellipses);
        if (j.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& a : j["algorithms"]) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        }
        cfg.base_seed = j.value("base_seed", cfg.base_seed);
        cfg.reference_n0 = j.value("reference_n0", cfg.reference_n0);
        cfg.tv_grid = j.value("tv_grid", cfg.tv_grid);
        if (j.contains("tv_weights")) {
            for (const auto& [key, value] : j["tv_weights"].items()) cfg.tv_weights[std::stod(key)] = value.get<double>();
        }
        cfg.n_threads = j.value("n_threads", cfg.n_threads);
        if (j.contains("fbp")) {
            const auto& f = j["fbp"];
            cfg.fbp.window = parse_window(f.value("window", std::string(window_name(cfg.fbp.window))));
            cfg.fbp.pad_factor = f.value("pad_factor", cfg.fbp.pad_factor);
            cfg.fbp.clamp_negative = f.value("clamp_negative", cfg.fbp.clamp_negative);
            cfg.fbp.floor_counts = f.value("floor_counts", cfg.fbp.floor_counts);
        }
        auto& mle = cfg.solver.mle;
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            mle.max_iters = s.value("max_iters", mle.max_iters);
            if (s.contains("armijo")) {
                const auto& a = s["armijo"];
                mle.armijo.c = a.value("c", mle.armijo.c);
                mle.armijo.shrink = a.value("shrink", mle.armijo.shrink);
                mle.armijo.max_backtracks = a.value("max_backtracks", mle.armijo.max_backtracks);
            }
            const auto init = s.value("init", std::string("fbp"));
            if (init != "fbp" && init != "zero") throw std::invalid_argument("solver.init must be fbp or zero");
            mle.init = init == "fbp" ? InitKind::Fbp : InitKind::Zero;
            mle.grad_tol = s.value("grad_tol", mle.grad_tol);
            mle.projector.supersample = s.value("supersample", mle.projector.supersample);
            cfg.solver.tv_inner_iters = s.value("tv_inner_iters", cfg.solver.tv_inner_iters);
            cfg.solver.fista = s.value("fista", cfg.solver.fista);
        }
        if (j.contains("scattering")) {
            const auto& s = j["scattering"];
            cfg.scattering.j_scales = s.value("j_scales", cfg.scattering.j_scales);
            cfg.scattering.n_orientations = s.value("n_orientations", cfg.scattering.n_orientations);
            cfg.scattering.order = s.value("order", cfg.scattering.order);
            const auto pooling = s.value("pooling", std::string("windowed"));
            if (pooling != "windowed" && pooling != "global") {
                throw std::invalid_argument("scattering.pooling must be windowed or global");
            }
            cfg.scattering.pooling = pooling == "global" ? ScatteringPooling::Global : ScatteringPooling::Windowed;
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("sweep config: ") + e.what());
    }
    cfg.solver.mle.fbp = cfg.fbp;
    cfg.validate();
    return cfg;
}

LogStats aggregate_log_stats(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("aggregate_log_stats: empty list");
    constexpr double kFloor = 1e-12;
    LogStats stats;
    double sum = 0.0;
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        sum += v;
        if (!(v > 0.0)) {
            v = kFloor;
            ++stats.clamped;
        }
        logs.push_back(std::log10(std::max(v, kFloor)));
    }
    const auto n = static_cast<double>(values.size());
    stats.mean = sum / n;
    if (values.size() > 1) {
        double mean_log = 0.0;
        for (double l : logs) mean_log += l;
        mean_log /= n;
        double ss = 0.0;
        for (double l : logs) ss += (l - mean_log) * (l - mean_log);
        stats.log_std = std::sqrt(ss / (n - 1.0));
    }
    return stats;
}

const SweepRow* SweepTable::find(Algorithm a, double n0, const std::string& metric) const {
    for (const auto& row : rows) {
        if (row.algorithm == a && row.n0 == n0 && row.metric == metric) return &row;
    }
    return nullptr;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index, double n0) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ tag);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(n0));
    return h == 0 ? 1 : h;
}

std::uint64_t phantom_seed(const SweepConfig& cfg, std::uint64_t tag, int index) {
    if (tag == kTestTag) return cfg.base_seed + static_cast<std::uint64_t>(index);
    return derive_seed(cfg.base_seed, tag, static_cast<std::uint64_t>(index), 0.0);
}

ImageGrid sweep_phantom(const SweepConfig& cfg, std::uint64_t tag, int index) {
    PhantomSpec spec;
    spec.kind = PhantomKind::RandomEllipses;
    spec.seed = phantom_seed(cfg, tag, index);
    spec.n_ellipses = cfg.n_ellipses;
    spec.side_px = cfg.side_px;
    spec.pixel_size = cfg.pixel_size();
    return make_random_ellipses(spec);
}

double calibrate_tv_weight(const SweepConfig& cfg, double n0, bool deterministic) {
    if (auto it = cfg.tv_weights.find(n0); it != cfg.tv_weights.end()) return it->second;
    const ScanGeometry geom = sweep_geometry(cfg);
    std::vector<PhotonMeasurement> meas(static_cast<std::size_t>(cfg.n_calib));
    std::vector<ImageGrid> truths(static_cast<std::size_t>(cfg.n_calib));
    parallel_for(truths.size(), cfg.n_threads, [&](std::size_t i) {
        truths[i] = sweep_phantom(cfg, kCalibTag, static_cast<int>(i));
        const std::uint64_t seed = deterministic ? 0 : derive_seed(cfg.base_seed, kCalibTag, i, n0);
        meas[i] = simulate_counts(forward_project(truths[i], geom, cfg.solver.mle.projector), n0, seed);
    });
    std::vector<double> grid;
    for (double g : cfg.tv_grid) grid.push_back(g * n0);
    MapTvConfig solver = cfg.solver;
    solver.mle.fbp = cfg.fbp;
    return select_tv_weight(meas, truths, grid, solver);
}

ImageGrid reconstruct(Algorithm algo, const PhotonMeasurement& meas, const SweepConfig& cfg, double tv_weight) {
    const int side = cfg.side_px;
    const double ps = cfg.pixel_size();
    MapTvConfig solver = cfg.solver;
    solver.mle.fbp = cfg.fbp;
    switch (algo) {
        case Algorithm::Fbp:
            return fbp_reconstruct(meas, cfg.fbp, side, ps);
        case Algorithm::Mle:
            return mle_reconstruct(meas, solver.mle, side, ps);
        case Algorithm::MapTv:
            solver.tv_weight = tv_weight;
            return map_tv_reconstruct(meas, solver, side, ps);
    }
    throw std::invalid_argument("reconstruct: unknown algorithm");
}

SweepTable run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepTable table;
    const ScanGeometry geom = sweep_geometry(cfg);
    const std::size_t n_items = static_cast<std::size_t>(cfg.n_test);
    const std::size_t n_levels = cfg.photon_grid.size();
    const std::size_t n_algos = cfg.algorithms.size();

    if (has_algorithm(cfg, Algorithm::MapTv)) {
        for (double n0 : cfg.photon_grid) table.tv_weights[n0] = calibrate_tv_weight(cfg, n0, false);
    }

    std::vector<ImageGrid> truths(n_items);
    std::vector<Sinogram> sinos(n_items);
    std::vector<Eigen::VectorXd> truth_coeffs(n_items);
    parallel_for(n_items, cfg.n_threads, [&](std::size_t i) {
        truths[i] = sweep_phantom(cfg, kTestTag, static_cast<int>(i));
        sinos[i] = forward_project(truths[i], geom, cfg.solver.mle.projector);
        truth_coeffs[i] = scattering_coeffs(truths[i], cfg.scattering);
    });

    struct Cell {
        std::optional<double> one_minus_r;
        std::optional<double> scattering_l2;
        std::string error;
    };
    // cells[(level * n_algos + algo) * n_items + item]
    std::vector<Cell> cells(n_levels * n_algos * n_items);
    parallel_for(n_levels * n_items, cfg.n_threads, [&](std::size_t work) {
        const std::size_t level = work / n_items;
        const std::size_t item = work % n_items;
        const double n0 = cfg.photon_grid[level];
        PhotonMeasurement meas;
        std::string shared_error;
        try {
            meas = simulate_counts(sinos[item], n0, derive_seed(cfg.base_seed, kTestTag, item, n0));
        } catch (const std::exception& e) {
            shared_error = e.what();
        }
        for (std::size_t a = 0; a < n_algos; ++a) {
            Cell& cell = cells[(level * n_algos + a) * n_items + item];
            if (!shared_error.empty()) {
                cell.error = shared_error;
                continue;
            }
            try {
                const Algorithm algo = cfg.algorithms[a];
                const double w = algo == Algorithm::MapTv ? table.tv_weights.at(n0) : 0.0;
                const ImageGrid recon = reconstruct(algo, meas, cfg, w);
                cell.one_minus_r = 1.0 - pearson_r(recon, truths[item]);
                cell.scattering_l2 = (scattering_coeffs(recon, cfg.scattering) - truth_coeffs[item]).norm();
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    });

    for (std::size_t a = 0; a < n_algos; ++a) {
        for (std::size_t level = 0; level < n_levels; ++level) {
            const double n0 = cfg.photon_grid[level];
            std::vector<double> omr;
            std::vector<double> scat;
            for (std::size_t item = 0; item < n_items; ++item) {
                const Cell& cell = cells[(level * n_algos + a) * n_items + item];
                if (!cell.error.empty()) {
                    table.errors.push_back(algorithm_name(cfg.algorithms[a]) + " n0=" + n0_label(n0) + " item " +
                                           std::to_string(item) + ": " + cell.error);
                    continue;
                }
                omr.push_back(*cell.one_minus_r);
                scat.push_back(*cell.scattering_l2);
            }
            const auto emit = [&](const std::string& metric, const std::vector<double>& values) {
                SweepRow row{cfg.algorithms[a], n0, metric, std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN(), static_cast<int>(values.size())};
                if (!values.empty()) {
                    const LogStats stats = aggregate_log_stats(values);
                    row.mean = stats.mean;
                    row.log_std = stats.log_std;
                    if (stats.clamped > 0) {
                        table.warnings.push_back(algorithm_name(row.algorithm) + " n0=" + n0_label(n0) + " " + metric +
                                                 ": " + std::to_string(stats.clamped) +
                                                 " nonpositive values clamped before log");
                    }
                }
                table.rows.push_back(row);
            };
            emit("one_minus_r", omr);
            emit("scattering_l2", scat);
        }
    }
    return table;
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "algorithm,n0,metric,mean,log_std,n_samples\n";
    for (const auto& row : table.rows) {
        out << algorithm_name(row.algorithm) << ',' << format_g9(row.n0) << ',' << row.metric << ','
            << format_g9(row.mean) << ',' << format_g9(row.log_std) << ',' << row.n_samples << '\n';
    }
    return out.str();
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << sweep_csv(table);
    if (!out) throw IoError("write failed: " + path.string());
}

std::string sweep_svg(const SweepTable& table, const std::string& metric) {
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double margin = 60.0;
    std::vector<const SweepRow*> rows;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : table.rows) {
        if (row.metric != metric || !(row.mean > 0.0)) continue;
        rows.push_back(&row);
        const double lx = std::log10(row.n0);
        const double ly = std::log10(row.mean);
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly - row.log_std);
        ymax = std::max(ymax, ly + row.log_std);
    }
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << metric
        << " vs photons per ray (log-log)</text>\n";
    if (rows.empty()) {
        svg << "</svg>\n";
        return svg.str();
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const auto px = [&](double lx) { return margin + (lx - xmin) / (xmax - xmin) * (width - 2 * margin); };
    const auto py = [&](double ly) { return height - margin - (ly - ymin) / (ymax - ymin) * (height - 2 * margin); };
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    int series = 0;
    for (Algorithm a : {Algorithm::Fbp, Algorithm::Mle, Algorithm::MapTv}) {
        std::ostringstream points;
        const char* color = colors[series % 4];
        bool any = false;
        for (const auto* row : rows) {
            if (row->algorithm != a) continue;
            any = true;
            const double x = px(std::log10(row->n0));
            const double ly = std::log10(row->mean);
            points << x << ',' << py(ly) << ' ';
            svg << "<line x1=\"" << x << "\" y1=\"" << py(ly - row->log_std) << "\" x2=\"" << x << "\" y2=\""
                << py(ly + row->log_std) << "\" stroke=\"" << color << "\"/>\n";
        }
        if (!any) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << points.str()
            << "\"/>\n";
        svg << "<text x=\"" << width - margin - 80 << "\" y=\"" << margin + 16 * series << "\" fill=\"" << color
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << algorithm_name(a) << "</text>\n";
        ++series;
    }
    svg << "</svg>\n";
    return svg.str();
}

ExportSummary export_dataset(const SweepConfig& cfg, Split split, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir.string() + ": " + ec.message());

    const ScanGeometry geom = sweep_geometry(cfg);
    const bool train = split == Split::Train;
    const std::uint64_t tag = train ? kTrainTag : kTestTag;
    const std::size_t n_items = static_cast<std::size_t>(cfg.n_test);

    RunManifest manifest;
    manifest.config = to_json(cfg);
    std::vector<std::uint64_t> phantom_seeds(n_items);
    std::vector<ImageGrid> truths(n_items);
    std::vector<Sinogram> sinos(n_items);
    parallel_for(n_items, cfg.n_threads, [&](std::size_t i) {
        phantom_seeds[i] = phantom_seed(cfg, tag, static_cast<int>(i));
        truths[i] = sweep_phantom(cfg, tag, static_cast<int>(i));
        sinos[i] = forward_project(truths[i], geom, cfg.solver.mle.projector);
    });

    const auto add_file = [&](const Tensor& t, const std::string& name, const std::string& role,
                              std::optional<std::string> algorithm, std::optional<double> n0,
                              std::vector<std::uint64_t> item_seeds) {
        const auto path = out_dir / name;
        write_tensor(t, path);
        ManifestEntry e;
        e.path = name;
        e.role = role;
        e.algorithm = std::move(algorithm);
        e.n0 = n0;
        e.seed = cfg.base_seed;
        e.checksum = sha256_hex(path);
        e.item_seeds = std::move(item_seeds);
        manifest.files.push_back(std::move(e));
    };

    add_file(to_tensor(truths), "ground_truth.dtns", "ground_truth", std::nullopt, std::nullopt, phantom_seeds);

    nlohmann::json tv_used = nlohmann::json::object();
    const std::vector<double> levels = train ? std::vector<double>{cfg.reference_n0} : cfg.photon_grid;
    for (double n0 : levels) {
        std::vector<PhotonMeasurement> meas(n_items);
        std::vector<std::uint64_t> noise_seeds(n_items);
        for (std::size_t i = 0; i < n_items; ++i) {
            noise_seeds[i] = train ? 0 : derive_seed(cfg.base_seed, kTestTag, i, n0);
            meas[i] = simulate_counts(sinos[i], n0, noise_seeds[i]);
        }
        for (Algorithm algo : cfg.algorithms) {
            double w = 0.0;
            if (algo == Algorithm::MapTv) {
                w = calibrate_tv_weight(cfg, n0, train);
                tv_used[n0_label(n0)] = w;
            }
            std::vector<ImageGrid> recons(n_items);
            parallel_for(n_items, cfg.n_threads, [&](std::size_t i) { recons[i] = reconstruct(algo, meas[i], cfg, w); });
            const std::string name = train ? "recon_" + algorithm_name(algo) + ".dtns"
                                           : "recon_" + algorithm_name(algo) + "_n0_" + n0_label(n0) + ".dtns";
            add_file(to_tensor(recons), name, "recon", algorithm_name(algo), n0, noise_seeds);
        }
    }

    manifest.extra = {
        {"split", train ? "train" : "test"},
        {"noise_free", train},
        {"pixel_size", cfg.pixel_size()},
        {"geometry", {{"n_angles", geom.n_angles()}, {"n_det", geom.n_det}, {"det_spacing", geom.det_spacing}}},
        {"tv_weights", tv_used},
    };
    const auto manifest_path = out_dir / "manifest.json";
    write_manifest(manifest, manifest_path);
    return {manifest_path, manifest.files.size()};
}

}  // namespace tomo
