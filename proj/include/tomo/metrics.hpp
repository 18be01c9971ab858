#pragma once

#include "tomo/image.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace tomo {

class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sample Pearson correlation over all entries (two-pass). Throws
/// UndefinedCorrelation when both inputs are constant; returns 0 when only
/// one of them is.
template <typename DerivedA, typename DerivedB>
double pearson_r(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("pearson_r: dimension mismatch");
    }
    if (a.size() == 0) throw std::invalid_argument("pearson_r: empty input");
    const auto n = static_cast<double>(a.size());
    const double mean_a = a.template cast<double>().sum() / n;
    const double mean_b = b.template cast<double>().sum() / n;
    double saa = 0.0;
    double sbb = 0.0;
    double sab = 0.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            const double da = static_cast<double>(a(r, c)) - mean_a;
            const double db = static_cast<double>(b(r, c)) - mean_b;
            saa += da * da;
            sbb += db * db;
            sab += da * db;
        }
    }
    if (saa == 0.0 && sbb == 0.0) throw UndefinedCorrelation("pearson_r: both inputs are constant");
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

inline double pearson_r(const ImageGrid& a, const ImageGrid& b) { return pearson_r(a.values(), b.values()); }

enum class ScatteringPooling {
    /// Low-pass maps subsampled by 2^J, all positions kept.
    Windowed,
    /// One spatial mean per channel; invariant to circular translation.
    Global,
};

struct ScatteringConfig {
    int j_scales = 3;
    int n_orientations = 6;
    int order = 2;
    ScatteringPooling pooling = ScatteringPooling::Windowed;

    friend bool operator==(const ScatteringConfig&, const ScatteringConfig&) = default;
};

struct MetricsReport {
    double pearson_r = 0.0;
    double one_minus_r = 1.0;
    double scattering_l2 = 0.0;
};

/// Morlet filter bank for one image side, built in the frequency domain
/// (periodized Gaussians, DC-corrected wavelets, shared normalization so the
/// Littlewood-Paley sum peaks at 1).
///
/// Coefficient order: S0; then S1 for (j1, theta1) in lexicographic order;
/// then S2 for (j1, theta1, j2 > j1, theta2) in lexicographic order. Each
/// channel contributes (side / 2^J)^2 row-major samples (Windowed) or a
/// single mean (Global).
class ScatteringNetwork {
public:
    ScatteringNetwork(int side_px, const ScatteringConfig& cfg);

    int side_px() const { return side_; }
    const ScatteringConfig& config() const { return cfg_; }
    int n_channels() const;
    Eigen::Index n_coefficients() const;

    Eigen::VectorXd transform(const RowMatrix<double>& image) const;

    /// |phi^|^2 + sum over wavelets of (|psi^(w)|^2 + |psi^(-w)|^2) / 2 on the
    /// DFT frequency grid.
    RowMatrix<double> littlewood_paley() const;

    // Frequency responses (real-valued), exposed for inspection.
    const RowMatrix<double>& lowpass() const { return phi_; }
    const RowMatrix<double>& wavelet(int j, int theta) const { return psi_[j * cfg_.n_orientations + theta]; }

private:
    using CMatrix = RowMatrix<std::complex<double>>;

    void pool(const CMatrix& spectrum, Eigen::VectorXd& out, Eigen::Index& cursor) const;

    int side_;
    ScatteringConfig cfg_;
    RowMatrix<double> phi_;
    std::vector<RowMatrix<double>> psi_;
};

/// Returns a cached network for (side, cfg); safe to call from several threads.
const ScatteringNetwork& scattering_network(int side_px, const ScatteringConfig& cfg);

Eigen::VectorXd scattering_coeffs(const ImageGrid& image, const ScatteringConfig& cfg = {});

double scattering_distance(const ImageGrid& a, const ImageGrid& b, const ScatteringConfig& cfg = {});

MetricsReport compute_metrics(const ImageGrid& recon, const ImageGrid& truth, const ScatteringConfig& cfg = {});

}  // namespace tomo
