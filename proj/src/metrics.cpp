#include "tomo/metrics.hpp"

#include <unsupported/Eigen/FFT>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace tomo {

namespace {

// Filter bank shape. Chosen so the Littlewood-Paley sum stays within
// [0.5, 1] over the whole DFT grid for the default J=3, L=6.
constexpr double kSigma0 = 0.5;
constexpr double kXi0 = 2.6;
constexpr double kLowpassSigma0 = 0.5;

using CMatrix = RowMatrix<std::complex<double>>;

double angular_frequency(int k, int n) {
    const int signed_k = k < (n + 1) / 2 ? k : k - n;
    return 2.0 * std::numbers::pi * signed_k / n;
}

// sum over periodic images of exp(-0.5 d^T A d), d = omega + 2 pi k - center
RowMatrix<double> periodized_gaussian(int n, double cx, double cy, const Eigen::Matrix2d& a) {
    RowMatrix<double> out(n, n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int r = 0; r < n; ++r) {
        const double wy = angular_frequency(r, n);
        for (int c = 0; c < n; ++c) {
            const double wx = angular_frequency(c, n);
            double acc = 0.0;
            for (int ky = -2; ky <= 2; ++ky) {
                for (int kx = -2; kx <= 2; ++kx) {
                    const double dx = wx + two_pi * kx - cx;
                    const double dy = wy + two_pi * ky - cy;
                    acc += std::exp(-0.5 * (a(0, 0) * dx * dx + 2.0 * a(0, 1) * dx * dy + a(1, 1) * dy * dy));
                }
            }
            out(r, c) = acc;
        }
    }
    return out;
}

void fft2(Eigen::FFT<double>& fft, CMatrix& m, bool inverse) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    std::vector<std::complex<double>> in;
    std::vector<std::complex<double>> out;
    in.resize(static_cast<std::size_t>(cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) in[c] = m(r, c);
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = out[c];
    }
    in.resize(static_cast<std::size_t>(rows));
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) in[r] = m(r, c);
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = out[r];
    }
}

// |z| computed as sqrt(re^2 + im^2) so that scaling by powers of two is exact.
CMatrix modulus(const CMatrix& z) {
    CMatrix out(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double re = z.data()[i].real();
        const double im = z.data()[i].imag();
        out.data()[i] = std::sqrt(re * re + im * im);
    }
    return out;
}

}  // namespace

ScatteringNetwork::ScatteringNetwork(int side_px, const ScatteringConfig& cfg) : side_(side_px), cfg_(cfg) {
    if (cfg.j_scales < 1) throw std::invalid_argument("ScatteringConfig: j_scales must be positive");
    if (cfg.n_orientations < 1) throw std::invalid_argument("ScatteringConfig: n_orientations must be positive");
    if (cfg.order != 1 && cfg.order != 2) throw std::invalid_argument("ScatteringConfig: order must be 1 or 2");
    const int stride = 1 << cfg.j_scales;
    if (side_px < stride || side_px % stride != 0) {
        throw std::invalid_argument("scattering: image side must be divisible by 2^j_scales");
    }

    const double slant = 4.0 / cfg.n_orientations;
    for (int j = 0; j < cfg.j_scales; ++j) {
        const double sigma = kSigma0 * std::pow(2.0, j);
        const double xi = kXi0 / std::pow(2.0, j);
        for (int l = 0; l < cfg.n_orientations; ++l) {
            const double theta = std::numbers::pi * l / cfg.n_orientations;
            Eigen::Matrix2d rot;
            rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
            const Eigen::Matrix2d cov =
                rot * Eigen::Vector2d(sigma * sigma, (sigma / slant) * (sigma / slant)).asDiagonal() * rot.transpose();
            RowMatrix<double> gabor = periodized_gaussian(side_px, xi * std::cos(theta), xi * std::sin(theta), cov);
            const RowMatrix<double> envelope = periodized_gaussian(side_px, 0.0, 0.0, cov);
            const double kappa = gabor(0, 0) / envelope(0, 0);
            psi_.push_back(gabor - kappa * envelope);
        }
    }
    const double sigma_phi = kLowpassSigma0 * stride;
    phi_ = periodized_gaussian(side_px, 0.0, 0.0, Eigen::Matrix2d::Identity() * sigma_phi * sigma_phi);

    const double scale = 1.0 / std::sqrt(littlewood_paley().maxCoeff());
    phi_ *= scale;
    for (auto& p : psi_) p *= scale;
}

int ScatteringNetwork::n_channels() const {
    const int first = cfg_.j_scales * cfg_.n_orientations;
    const int pairs = cfg_.j_scales * (cfg_.j_scales - 1) / 2;
    const int second = cfg_.order == 2 ? pairs * cfg_.n_orientations * cfg_.n_orientations : 0;
    return 1 + first + second;
}

Eigen::Index ScatteringNetwork::n_coefficients() const {
    if (cfg_.pooling == ScatteringPooling::Global) return n_channels();
    const Eigen::Index m = side_ >> cfg_.j_scales;
    return n_channels() * m * m;
}

RowMatrix<double> ScatteringNetwork::littlewood_paley() const {
    const int n = side_;
    RowMatrix<double> lp = phi_.array().square().matrix();
    for (const auto& p : psi_) {
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                const double mirrored = p((n - r) % n, (n - c) % n);
                lp(r, c) += 0.5 * (p(r, c) * p(r, c) + mirrored * mirrored);
            }
        }
    }
    return lp;
}

void ScatteringNetwork::pool(const CMatrix& spectrum, Eigen::VectorXd& out, Eigen::Index& cursor) const {
    const int n = side_;
    if (cfg_.pooling == ScatteringPooling::Global) {
        out[cursor++] = spectrum(0, 0).real() / (static_cast<double>(n) * n);
        return;
    }
    // Subsampling by s in space folds the spectrum onto an (n/s)^2 grid.
    const int stride = 1 << cfg_.j_scales;
    const int m = n / stride;
    CMatrix folded = CMatrix::Zero(m, m);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) folded(r % m, c % m) += spectrum(r, c);
    }
    Eigen::FFT<double> fft;
    fft2(fft, folded, true);
    const double norm = 1.0 / (static_cast<double>(stride) * stride);
    for (Eigen::Index i = 0; i < folded.size(); ++i) out[cursor++] = folded.data()[i].real() * norm;
}

Eigen::VectorXd ScatteringNetwork::transform(const RowMatrix<double>& image) const {
    if (image.rows() != side_ || image.cols() != side_) {
        throw std::invalid_argument("scattering: image side does not match the filter bank");
    }
    Eigen::FFT<double> fft;
    Eigen::VectorXd out(n_coefficients());
    Eigen::Index cursor = 0;

    CMatrix x_hat = image.cast<std::complex<double>>();
    fft2(fft, x_hat, false);
    pool((x_hat.array() * phi_.array()).matrix(), out, cursor);

    std::vector<CMatrix> first_order;
    first_order.reserve(psi_.size());
    for (const auto& psi : psi_) {
        CMatrix u = (x_hat.array() * psi.array()).matrix();
        fft2(fft, u, true);
        u = modulus(u);
        fft2(fft, u, false);
        pool((u.array() * phi_.array()).matrix(), out, cursor);
        first_order.push_back(std::move(u));
    }

    if (cfg_.order == 2) {
        const int n_orient = cfg_.n_orientations;
        for (int j1 = 0; j1 < cfg_.j_scales; ++j1) {
            for (int t1 = 0; t1 < n_orient; ++t1) {
                const CMatrix& u1 = first_order[j1 * n_orient + t1];
                for (int j2 = j1 + 1; j2 < cfg_.j_scales; ++j2) {
                    for (int t2 = 0; t2 < n_orient; ++t2) {
                        CMatrix u2 = (u1.array() * psi_[j2 * n_orient + t2].array()).matrix();
                        fft2(fft, u2, true);
                        u2 = modulus(u2);
                        fft2(fft, u2, false);
                        pool((u2.array() * phi_.array()).matrix(), out, cursor);
                    }
                }
            }
        }
    }
    return out;
}

const ScatteringNetwork& scattering_network(int side_px, const ScatteringConfig& cfg) {
    using Key = std::tuple<int, int, int, int, int>;
    static std::mutex mutex;
    static std::map<Key, std::unique_ptr<ScatteringNetwork>> cache;
    const Key key{side_px, cfg.j_scales, cfg.n_orientations, cfg.order, static_cast<int>(cfg.pooling)};
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<ScatteringNetwork>(side_px, cfg);
    return *slot;
}

Eigen::VectorXd scattering_coeffs(const ImageGrid& image, const ScatteringConfig& cfg) {
    return scattering_network(image.side_px(), cfg).transform(image.values());
}

double scattering_distance(const ImageGrid& a, const ImageGrid& b, const ScatteringConfig& cfg) {
    if (a.side_px() != b.side_px()) throw std::invalid_argument("scattering_distance: dimension mismatch");
    return (scattering_coeffs(a, cfg) - scattering_coeffs(b, cfg)).norm();
}

MetricsReport compute_metrics(const ImageGrid& recon, const ImageGrid& truth, const ScatteringConfig& cfg) {
    MetricsReport report;
    report.pearson_r = pearson_r(recon, truth);
    report.one_minus_r = 1.0 - report.pearson_r;
    report.scattering_l2 = scattering_distance(recon, truth, cfg);
    return report;
}

}  // namespace tomo
