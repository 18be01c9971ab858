#include "tomo/photon_noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tomo {

namespace {

void check_n0(double n0) {
    if (!(n0 > 0.0) || !std::isfinite(n0)) throw std::invalid_argument("photon count n0 must be positive");
}

std::uint32_t to_count(double k) {
    constexpr double cap = std::numeric_limits<std::uint32_t>::max();
    return static_cast<std::uint32_t>(std::min(std::max(k, 0.0), cap));
}

std::uint32_t poisson_inversion(double lambda, UniformStream& stream) {
    const double u = stream.next();
    double p = std::exp(-lambda);
    double cdf = p;
    std::uint32_t k = 0;
    // Rounding can leave cdf a hair below 1; the cap only matters for u ~ 1.
    while (u > cdf && k < 1000) {
        ++k;
        p *= lambda / k;
        cdf += p;
    }
    return k;
}

std::uint32_t poisson_ptrs(double lambda, UniformStream& stream) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = stream.next() - 0.5;
        const double v = stream.next();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return to_count(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -lambda + k * loglam - std::lgamma(k + 1.0)) {
            return to_count(k);
        }
    }
}

}  // namespace

RowMatrix<double> expected_counts(const Sinogram& sino, double n0) {
    check_n0(n0);
    if (!sino.values.allFinite()) throw std::invalid_argument("expected_counts: sinogram has non-finite values");
    return n0 * (-sino.values.array()).exp().matrix();
}

std::uint32_t sample_poisson(double lambda, UniformStream& stream) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("sample_poisson: lambda must be nonnegative");
    if (lambda == 0.0) return 0;
    return lambda < 10.0 ? poisson_inversion(lambda, stream) : poisson_ptrs(lambda, stream);
}

PhotonMeasurement simulate_counts(const Sinogram& sino, double n0, std::uint64_t seed) {
    const RowMatrix<double> lambda = expected_counts(sino, n0);
    PhotonMeasurement meas;
    meas.geometry = sino.geometry;
    meas.n0 = n0;
    meas.seed = seed;
    meas.counts.resize(lambda.rows(), lambda.cols());
    const auto n = static_cast<std::uint64_t>(lambda.size());
    for (std::uint64_t i = 0; i < n; ++i) {
        const double lam = lambda.data()[i];
        if (seed == 0) {
            meas.counts.data()[i] = to_count(std::round(lam));
        } else {
            UniformStream stream(seed, i);
            meas.counts.data()[i] = sample_poisson(lam, stream);
        }
    }
    return meas;
}

Sinogram log_transform(const PhotonMeasurement& meas, double floor_counts) {
    if (!(floor_counts > 0.0)) throw std::invalid_argument("log_transform: floor_counts must be positive");
    check_n0(meas.n0);
    Sinogram sino(meas.geometry);
    for (Eigen::Index i = 0; i < meas.counts.size(); ++i) {
        const double c = std::max(static_cast<double>(meas.counts.data()[i]), floor_counts);
        sino.values.data()[i] = std::max(0.0, std::log(meas.n0 / c));
    }
    return sino;
}

}  // namespace tomo
