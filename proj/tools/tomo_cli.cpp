#include "tomo/config.hpp"
#include "tomo/dtns.hpp"
#include "tomo/manifest.hpp"
#include "tomo/sweep.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised for bad combinations of otherwise well-formed arguments.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path sidecar_path(const fs::path& p) { return fs::path(p.string() + ".json"); }

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw tomo::IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw tomo::IoError("write failed: " + path.string());
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw tomo::IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw tomo::IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

json geometry_json(const tomo::ScanGeometry& g) {
    return {{"n_angles", g.n_angles()}, {"n_det", g.n_det}, {"det_spacing", g.det_spacing}, {"angles_rad", g.angles_rad}};
}

tomo::ScanGeometry geometry_from_json(const json& j) {
    tomo::ScanGeometry g;
    g.angles_rad = j.at("angles_rad").get<std::vector<double>>();
    g.n_det = j.at("n_det").get<int>();
    g.det_spacing = j.at("det_spacing").get<double>();
    g.validate();
    return g;
}

double image_pixel_size(const fs::path& image_path) {
    const auto side = sidecar_path(image_path);
    if (!fs::exists(side)) return 1.0;
    return read_json(side).value("pixel_size", 1.0);
}

struct Globals {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string config;

    tomo::SweepConfig sweep_config() const {
        tomo::SweepConfig cfg;
        if (!config.empty()) {
            if (!fs::exists(config)) throw tomo::IoError("config file not found: " + config);
            cfg = tomo::sweep_config_from_json(tomo::load_config_file(config));
        }
        if (seed_set) cfg.base_seed = seed;
        return cfg;
    }

    fs::path out_or(const std::string& fallback) const { return out.empty() ? fs::path(fallback) : fs::path(out); }
};

int run_phantom(const Globals& g, const std::string& kind, std::optional<int> side, std::optional<double> fov,
                std::optional<int> n_ellipses) {
    const auto cfg = g.sweep_config();
    tomo::PhantomSpec spec;
    if (kind == "shepp-logan") {
        spec.kind = tomo::PhantomKind::SheppLogan;
    } else if (kind == "random") {
        spec.kind = tomo::PhantomKind::RandomEllipses;
    } else {
        throw UsageError("--kind must be shepp-logan or random");
    }
    spec.seed = g.seed;
    spec.side_px = side.value_or(cfg.side_px);
    spec.n_ellipses = n_ellipses.value_or(cfg.n_ellipses);
    spec.pixel_size = fov.value_or(cfg.field_of_view) / spec.side_px;
    const auto image = tomo::make_phantom(spec);

    const auto out = g.out_or("phantom.dtns");
    ensure_parent(out);
    tomo::write_tensor(tomo::to_tensor(image), out);
    write_json({{"kind", "image"}, {"phantom", kind}, {"seed", spec.seed}, {"side_px", spec.side_px},
                {"pixel_size", spec.pixel_size}, {"n_ellipses", spec.n_ellipses}},
               sidecar_path(out));
    std::cout << out.string() << '\n';
    return 0;
}

int run_simulate(const Globals& g, const std::string& input, double n0, std::optional<int> views) {
    const auto cfg = g.sweep_config();
    if (!fs::exists(input)) throw tomo::IoError("input not found: " + input);
    const auto image = tomo::image_from_tensor(tomo::read_tensor(input), image_pixel_size(input));
    const auto geom = tomo::derive_geometry(image, views.value_or(cfg.n_views));
    const auto sino = tomo::forward_project(image, geom);
    const auto meas = tomo::simulate_counts(sino, n0, g.seed);

    const auto out = g.out_or("counts.dtns");
    ensure_parent(out);
    tomo::write_tensor(tomo::to_tensor(meas.counts), out);
    write_json({{"kind", "counts"}, {"n0", n0}, {"seed", g.seed}, {"side_px", image.side_px()},
                {"pixel_size", image.pixel_size()}, {"geometry", geometry_json(geom)}, {"source", input}},
               sidecar_path(out));
    std::cout << out.string() << '\n';
    return 0;
}

int run_recon(const Globals& g, const std::string& input, const std::string& algo_name, std::optional<double> tv_weight,
              std::optional<int> max_iters) {
    const auto cfg = g.sweep_config();
    const auto algo = tomo::parse_algorithm(algo_name);
    if (input.empty()) throw UsageError("recon needs an input counts file (--in)");
    if (!fs::exists(input)) throw tomo::IoError("input not found: " + input);
    const auto meta_path = sidecar_path(input);
    if (!fs::exists(meta_path)) throw tomo::IoError("metadata sidecar not found: " + meta_path.string());
    const json meta = read_json(meta_path);

    tomo::PhotonMeasurement meas;
    meas.counts = tomo::counts_from_tensor(tomo::read_tensor(input));
    meas.geometry = geometry_from_json(meta.at("geometry"));
    meas.n0 = meta.at("n0").get<double>();
    meas.seed = meta.value("seed", std::uint64_t{0});

    auto run_cfg = cfg;
    run_cfg.side_px = meta.at("side_px").get<int>();
    run_cfg.field_of_view = meta.at("pixel_size").get<double>() * run_cfg.side_px;
    if (max_iters) run_cfg.solver.mle.max_iters = *max_iters;
    double w = 0.0;
    if (algo == tomo::Algorithm::MapTv) {
        if (tv_weight) {
            w = *tv_weight;
        } else if (auto it = cfg.tv_weights.find(meas.n0); it != cfg.tv_weights.end()) {
            w = it->second;
        } else {
            throw UsageError("maptv needs --tv-weight or a tv_weights entry for this n0 in --config");
        }
    }
    const auto image = tomo::reconstruct(algo, meas, run_cfg, w);

    const auto out = g.out_or("recon.dtns");
    ensure_parent(out);
    tomo::write_tensor(tomo::to_tensor(image), out);
    write_json({{"kind", "image"}, {"algorithm", tomo::algorithm_name(algo)}, {"tv_weight", w}, {"n0", meas.n0},
                {"side_px", image.side_px()}, {"pixel_size", image.pixel_size()}, {"source", input}},
               sidecar_path(out));
    std::cout << out.string() << '\n';
    return 0;
}

int run_metrics(const Globals& g, const std::string& a_path, const std::string& b_path, const std::string& pooling) {
    const auto cfg = g.sweep_config();
    auto scat = cfg.scattering;
    if (pooling == "global") {
        scat.pooling = tomo::ScatteringPooling::Global;
    } else if (pooling == "windowed") {
        scat.pooling = tomo::ScatteringPooling::Windowed;
    } else if (!pooling.empty()) {
        throw UsageError("--pooling must be windowed or global");
    }
    for (const auto& p : {a_path, b_path}) {
        if (!fs::exists(p)) throw tomo::IoError("input not found: " + p);
    }
    const auto ta = tomo::read_tensor(a_path);
    const auto tb = tomo::read_tensor(b_path);
    if (ta.dims != tb.dims) throw std::invalid_argument("metrics: tensor shapes differ");
    const std::size_t n = ta.dims.size() == 3 ? ta.dims[0] : 1;

    json items = json::array();
    double sum_r = 0.0;
    double sum_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = tomo::image_from_tensor(ta, 1.0, i);
        const auto b = tomo::image_from_tensor(tb, 1.0, i);
        const auto rep = tomo::compute_metrics(a, b, scat);
        items.push_back({{"pearson_r", rep.pearson_r}, {"one_minus_r", rep.one_minus_r},
                         {"scattering_l2", rep.scattering_l2}});
        sum_r += rep.pearson_r;
        sum_s += rep.scattering_l2;
    }
    json report;
    if (n == 1) {
        report = items[0];
    } else {
        report = {{"n_items", n}, {"mean_pearson_r", sum_r / n}, {"mean_scattering_l2", sum_s / n}, {"items", items}};
    }
    if (!g.out.empty()) {
        ensure_parent(g.out);
        write_json(report, g.out);
    }
    std::cout << report.dump(2) << '\n';
    return 0;
}

int run_sweep_cmd(const Globals& g, bool svg) {
    const auto cfg = g.sweep_config();
    const fs::path dir = g.out_or("results");
    fs::create_directories(dir);
    const auto table = tomo::run_sweep(cfg);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& e : table.errors) std::cerr << "error: " << e << '\n';

    tomo::RunManifest manifest;
    manifest.config = tomo::to_json(cfg);
    json weights = json::object();
    for (const auto& [n0, w] : table.tv_weights) weights[std::to_string(n0)] = w;
    manifest.extra = {{"tv_weights", weights}, {"errors", table.errors}, {"warnings", table.warnings}};

    const auto add = [&](const std::string& name, const std::string& role) {
        tomo::ManifestEntry e;
        e.path = name;
        e.role = role;
        e.seed = cfg.base_seed;
        e.checksum = tomo::sha256_hex(dir / name);
        manifest.files.push_back(e);
    };
    tomo::write_sweep_csv(table, dir / "sweep.csv");
    add("sweep.csv", "table");
    if (svg) {
        for (const std::string metric : {"one_minus_r", "scattering_l2"}) {
            const std::string name = "sweep_" + metric + ".svg";
            std::ofstream out(dir / name, std::ios::trunc);
            if (!out) throw tomo::IoError("cannot open for writing: " + (dir / name).string());
            out << tomo::sweep_svg(table, metric);
            out.close();
            add(name, "plot");
        }
    }
    tomo::write_manifest(manifest, dir / "manifest.json");
    std::cout << (dir / "sweep.csv").string() << '\n';
    return table.errors.empty() ? 0 : 2;
}

int run_dataset(const Globals& g, const std::string& split_name) {
    const auto cfg = g.sweep_config();
    tomo::Split split;
    if (split_name == "train") {
        split = tomo::Split::Train;
    } else if (split_name == "test") {
        split = tomo::Split::Test;
    } else {
        throw UsageError("--split must be train or test");
    }
    const auto summary = tomo::export_dataset(cfg, split, g.out_or("dataset/" + split_name));
    std::cout << summary.manifest_path.string() << " (" << summary.n_files << " tensors)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-view photon-limited tomography toolkit"};
    app.require_subcommand(1);

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Seed (phantom seed, noise seed, or sweep base seed)");
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--config", g.config, "Sweep config (TOML or JSON)");

    auto* phantom = app.add_subcommand("phantom", "Generate a phantom image (DTNS)");
    std::string kind = "random";
    std::optional<int> side;
    std::optional<double> fov;
    std::optional<int> n_ellipses;
    phantom->add_option("--kind", kind, "shepp-logan or random")->check(CLI::IsMember({"shepp-logan", "random"}));
    phantom->add_option("--side", side, "Pixels per side");
    phantom->add_option("--fov", fov, "Field of view (physical width)");
    phantom->add_option("--n-ellipses", n_ellipses, "Ellipses for random phantoms");

    auto* simulate = app.add_subcommand("simulate", "Project a phantom and draw photon counts");
    std::string sim_in;
    double n0 = 1000.0;
    std::optional<int> views;
    simulate->add_option("--in,input", sim_in, "Phantom tensor")->required();
    simulate->add_option("--n0", n0, "Incident photons per ray")->check(CLI::PositiveNumber);
    simulate->add_option("--views", views, "Number of projection angles");

    auto* recon = app.add_subcommand("recon", "Reconstruct an image from counts");
    std::string recon_in;
    std::string algo = "fbp";
    std::optional<double> tv_weight;
    std::optional<int> max_iters;
    recon->add_option("--in,input", recon_in, "Counts tensor (with .json sidecar)");
    recon->add_option("--algo", algo, "fbp, mle or maptv")->check(CLI::IsMember({"fbp", "mle", "maptv"}));
    recon->add_option("--tv-weight", tv_weight, "Absolute TV weight for maptv");
    recon->add_option("--max-iters", max_iters, "Iteration budget for mle/maptv");

    auto* metrics = app.add_subcommand("metrics", "Compare two image tensors");
    std::string ma;
    std::string mb;
    std::string pooling;
    metrics->add_option("a", ma, "Reconstruction")->required();
    metrics->add_option("b", mb, "Reference")->required();
    metrics->add_option("--pooling", pooling, "Scattering pooling: windowed or global");

    auto* sweep = app.add_subcommand("sweep", "Run the photon sweep and write sweep.csv + manifest.json");
    bool svg = false;
    sweep->add_flag("--svg", svg, "Also write log-log SVG plots");

    auto* dataset = app.add_subcommand("dataset", "Export reconstructions for learned refinement");
    std::string split = "train";
    dataset->add_option("--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));

    // Global flags are accepted after the subcommand too.
    for (auto* sub : {phantom, simulate, recon, metrics, sweep, dataset}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    g.seed_set = seed_opt->count() > 0;

    try {
        if (*phantom) return run_phantom(g, kind, side, fov, n_ellipses);
        if (*simulate) return run_simulate(g, sim_in, n0, views);
        if (*recon) return run_recon(g, recon_in, algo, tv_weight, max_iters);
        if (*metrics) return run_metrics(g, ma, mb, pooling);
        if (*sweep) return run_sweep_cmd(g, svg);
        if (*dataset) return run_dataset(g, split);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
