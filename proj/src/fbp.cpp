#include "tomo/fbp.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace tomo {

int fbp_pad_length(int n_det, int pad_factor) {
    if (pad_factor < 2) throw std::invalid_argument("FbpConfig: pad_factor must be >= 2");
    const long target = static_cast<long>(pad_factor) * n_det;
    int len = 1;
    while (len < target) len *= 2;
    return len;
}

std::vector<double> ramlak_kernel(int pad_length, double det_spacing) {
    std::vector<double> h(static_cast<std::size_t>(pad_length), 0.0);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    h[0] = 0.25;
    double sum = 0.25;
    const int half = pad_length / 2;
    for (int k = 1; k < half; k += 2) {
        const double v = -1.0 / (pi2 * k * k);
        h[k] = v;
        h[pad_length - k] = v;
        sum += 2.0 * v;
    }
    if (pad_length >= 2) h[half] -= sum;
    for (auto& v : h) v /= det_spacing;
    return h;
}

Sinogram ramp_filter(const Sinogram& sino, const FbpConfig& cfg) {
    const int n_det = sino.n_det();
    const int len = fbp_pad_length(n_det, cfg.pad_factor);
    const auto kernel = ramlak_kernel(len, sino.geometry.det_spacing);

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> kernel_c(kernel.begin(), kernel.end());
    std::vector<std::complex<double>> response;
    fft.fwd(response, kernel_c);
    if (cfg.window == FbpWindow::Hann) {
        for (int m = 0; m < len; ++m) {
            response[m] *= 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * m / len));
        }
    }

    Sinogram out(sino.geometry);
    std::vector<std::complex<double>> row(static_cast<std::size_t>(len));
    std::vector<std::complex<double>> spectrum;
    std::vector<std::complex<double>> filtered;
    const int tail = len - n_det;
    for (int a = 0; a < sino.n_angles(); ++a) {
        for (int k = 0; k < n_det; ++k) row[k] = sino.values(a, k);
        // Padding wraps around: the first half continues the right edge,
        // the second half leads into the left edge.
        for (int k = 0; k < tail; ++k) {
            row[n_det + k] = (k < tail / 2) ? sino.values(a, n_det - 1) : sino.values(a, 0);
        }
        fft.fwd(spectrum, row);
        for (int m = 0; m < len; ++m) spectrum[m] *= response[m];
        fft.inv(filtered, spectrum);
        for (int k = 0; k < n_det; ++k) out.values(a, k) = filtered[k].real();
    }
    return out;
}

ImageGrid fbp_backproject(const Sinogram& filtered, int side_px, double pixel_size) {
    const auto& geom = filtered.geometry;
    geom.validate();
    if (!geom.covers(side_px, pixel_size)) {
        throw std::invalid_argument("fbp: detector extent does not cover the image diagonal");
    }
    ImageGrid image(side_px, pixel_size);
    const double det_center = 0.5 * (geom.n_det - 1);
    for (int a = 0; a < geom.n_angles(); ++a) {
        const double c = std::cos(geom.angles_rad[a]) / geom.det_spacing;
        const double s = std::sin(geom.angles_rad[a]) / geom.det_spacing;
        const double* row = filtered.values.row(a).data();
        for (int r = 0; r < side_px; ++r) {
            const double y = image.y_of_row(r);
            for (int col = 0; col < side_px; ++col) {
                const double u = image.x_of_col(col) * c + y * s + det_center;
                const double uf = std::floor(u);
                const int k = static_cast<int>(uf);
                if (k < 0 || k + 1 >= geom.n_det) continue;
                const double frac = u - uf;
                image(r, col) += (1.0 - frac) * row[k] + frac * row[k + 1];
            }
        }
    }
    image.values() *= std::numbers::pi / geom.n_angles();
    return image;
}

ImageGrid fbp_reconstruct(const Sinogram& line_integrals, const FbpConfig& cfg, int side_px, double pixel_size) {
    ImageGrid image = fbp_backproject(ramp_filter(line_integrals, cfg), side_px, pixel_size);
    if (cfg.clamp_negative) image.values() = image.values().cwiseMax(0.0);
    return image;
}

ImageGrid fbp_reconstruct(const PhotonMeasurement& meas, const FbpConfig& cfg, int side_px, double pixel_size) {
    return fbp_reconstruct(log_transform(meas, cfg.floor_counts), cfg, side_px, pixel_size);
}

}  // namespace tomo
