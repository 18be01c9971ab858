#pragma once

#include "tomo/philox.hpp"
#include "tomo/projector.hpp"

#include <cstdint>

namespace tomo {

using CountMatrix = Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Photon counts per ray. seed == 0 marks a noise-free measurement whose
/// counts are the rounded Beer-Lambert means.
struct PhotonMeasurement {
    ScanGeometry geometry;
    CountMatrix counts;
    double n0 = 0.0;
    std::uint64_t seed = 0;

    bool deterministic() const { return seed == 0; }
};

/// Beer-Lambert means n0 * exp(-sino).
RowMatrix<double> expected_counts(const Sinogram& sino, double n0);

/// Exact Poisson variate: sequential-search inversion below lambda = 10,
/// Hormann's PTRS transformed rejection above.
std::uint32_t sample_poisson(double lambda, UniformStream& stream);

/// Counts for every ray. Ray i draws from UniformStream(seed, i), so the
/// result does not depend on evaluation order.
PhotonMeasurement simulate_counts(const Sinogram& sino, double n0, std::uint64_t seed);

/// b_i = max(0, ln(n0 / max(counts_i, floor_counts))).
Sinogram log_transform(const PhotonMeasurement& meas, double floor_counts = 0.5);

}  // namespace tomo
