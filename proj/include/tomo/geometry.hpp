#pragma once

#include "tomo/image.hpp"

#include <vector>

namespace tomo {

/// Parallel-beam acquisition. Detector bin k sits at signed offset
/// (k - (n_det - 1) / 2) * det_spacing from the rotation center.
struct ScanGeometry {
    std::vector<double> angles_rad;
    int n_det = 0;
    double det_spacing = 1.0;

    int n_angles() const { return static_cast<int>(angles_rad.size()); }
    std::size_t n_rays() const { return angles_rad.size() * static_cast<std::size_t>(n_det); }
    double det_offset(int bin) const { return (bin - 0.5 * (n_det - 1)) * det_spacing; }
    double extent() const { return n_det * det_spacing; }

    /// Throws std::invalid_argument unless angles are strictly increasing in [0, pi)
    /// and the detector is non-empty.
    void validate() const;

    /// True when the detector extent spans the diagonal of the given grid.
    bool covers(int side_px, double pixel_size) const;

    friend bool operator==(const ScanGeometry&, const ScanGeometry&) = default;
};

/// Evenly spaced full-angle geometry: angles k*pi/n_angles.
std::vector<double> full_angle_set(int n_angles);

ScanGeometry derive_geometry(const ImageGrid& image, int n_angles);
ScanGeometry derive_geometry(int side_px, double pixel_size, int n_angles);

}  // namespace tomo
