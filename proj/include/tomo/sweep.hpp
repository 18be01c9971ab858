#pragma once

#include "tomo/fbp.hpp"
#include "tomo/iterative.hpp"
#include "tomo/metrics.hpp"
#include "tomo/phantom.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tomo {

enum class Algorithm { Fbp, Mle, MapTv };

std::string algorithm_name(Algorithm a);  // "fbp" | "mle" | "maptv"
Algorithm parse_algorithm(const std::string& name);

struct SweepConfig {
    int n_views = 32;
    int side_px = 128;
    /// Physical width of the image; pixel_size = field_of_view / side_px.
    double field_of_view = 1.0;
    std::vector<double> photon_grid{32, 100, 316, 1000, 3162, 10000};
    int n_test = 1000;
    int n_calib = 10;
    int n_ellipses = 8;
    std::vector<Algorithm> algorithms{Algorithm::Fbp, Algorithm::Mle, Algorithm::MapTv};
    std::uint64_t base_seed = 0;
    /// Photon level of the noise-free training measurements.
    double reference_n0 = 1e6;
    /// TV weights tried by calibration, in units of n0 (weight = value * n0).
    std::vector<double> tv_grid{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    /// Fixed TV weights per photon level; calibration is skipped for these.
    std::map<double, double> tv_weights;
    FbpConfig fbp;
    MapTvConfig solver;
    ScatteringConfig scattering;
    int n_threads = 1;

    double pixel_size() const { return field_of_view / side_px; }
    void validate() const;
};

nlohmann::json to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct LogStats {
    double mean = 0.0;
    double log_std = 0.0;
    int clamped = 0;  // values raised to 1e-12 before the log
};

/// Arithmetic mean and sample (n-1) standard deviation of log10(values).
LogStats aggregate_log_stats(const std::vector<double>& values);

struct SweepRow {
    Algorithm algorithm;
    double n0;
    std::string metric;  // one_minus_r | scattering_l2
    double mean;
    double log_std;
    int n_samples;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::map<double, double> tv_weights;  // weight actually used per n0
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    const SweepRow* find(Algorithm a, double n0, const std::string& metric) const;
};

/// Per-item noise seed; never zero (zero means noise-free).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index, double n0);

inline constexpr std::uint64_t kTestTag = 0;
inline constexpr std::uint64_t kCalibTag = 1;
inline constexpr std::uint64_t kTrainTag = 2;

/// Phantom seeds: test items use base_seed + index, calibration and training
/// items use derive_seed with their tag.
std::uint64_t phantom_seed(const SweepConfig& cfg, std::uint64_t tag, int index);
ImageGrid sweep_phantom(const SweepConfig& cfg, std::uint64_t tag, int index);

/// Calibrated (or configured) TV weight for one photon level. Noise-free
/// calibration when deterministic is set.
double calibrate_tv_weight(const SweepConfig& cfg, double n0, bool deterministic);

ImageGrid reconstruct(Algorithm algo, const PhotonMeasurement& meas, const SweepConfig& cfg, double tv_weight);

SweepTable run_sweep(const SweepConfig& cfg);

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);
std::string sweep_csv(const SweepTable& table);

/// Log-log line plot of one metric, error bars spanning mean * 10^(+-log_std).
std::string sweep_svg(const SweepTable& table, const std::string& metric);

enum class Split { Train, Test };

struct ExportSummary {
    std::filesystem::path manifest_path;
    std::size_t n_files = 0;
};

ExportSummary export_dataset(const SweepConfig& cfg, Split split, const std::filesystem::path& out_dir);

}  // namespace tomo
