#pragma once

#include "tomo/photon_noise.hpp"
#include "tomo/projector.hpp"

#include <vector>

namespace tomo {

enum class FbpWindow { RamLak, Hann };

struct FbpConfig {
    FbpWindow window = FbpWindow::RamLak;
    int pad_factor = 2;
    bool clamp_negative = true;
    double floor_counts = 0.5;
};

/// Next power of two >= pad_factor * n_det.
int fbp_pad_length(int n_det, int pad_factor);

/// Spatial Ram-Lak kernel on a circular grid of length pad_length, in units
/// of 1/det_spacing: 1/4 at the origin, -1/(pi k)^2 at odd offsets, 0 at even
/// offsets. The Nyquist-distance tap (pad_length/2) absorbs the truncated tail
/// so the kernel sums to exactly zero.
std::vector<double> ramlak_kernel(int pad_length, double det_spacing);

/// Ramp-filters every projection row (edge-replicated padding, FFT
/// convolution, truncation back to n_det).
Sinogram ramp_filter(const Sinogram& sino, const FbpConfig& cfg = {});

/// Pixel-driven backprojection with linear detector interpolation, scaled by
/// pi / n_angles. Distinct from the algebraic adjoint used by the solvers.
ImageGrid fbp_backproject(const Sinogram& filtered, int side_px, double pixel_size);

ImageGrid fbp_reconstruct(const Sinogram& line_integrals, const FbpConfig& cfg, int side_px, double pixel_size);

ImageGrid fbp_reconstruct(const PhotonMeasurement& meas, const FbpConfig& cfg, int side_px, double pixel_size);

}  // namespace tomo
