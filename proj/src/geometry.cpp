#include "tomo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tomo {

void ScanGeometry::validate() const {
    if (angles_rad.empty()) throw std::invalid_argument("ScanGeometry: no angles");
    if (n_det <= 0) throw std::invalid_argument("ScanGeometry: n_det must be positive");
    if (!(det_spacing > 0.0)) throw std::invalid_argument("ScanGeometry: det_spacing must be positive");
    for (std::size_t k = 0; k < angles_rad.size(); ++k) {
        const double a = angles_rad[k];
        if (!(a >= 0.0 && a < std::numbers::pi)) {
            throw std::invalid_argument("ScanGeometry: angle outside [0, pi)");
        }
        if (k > 0 && !(a > angles_rad[k - 1])) {
            throw std::invalid_argument("ScanGeometry: angles must be strictly increasing");
        }
    }
}

bool ScanGeometry::covers(int side_px, double pixel_size) const {
    // Small slack so that ceil(side*sqrt2) detectors count as covering.
    return extent() * (1.0 + 1e-12) >= side_px * pixel_size * std::numbers::sqrt2;
}

std::vector<double> full_angle_set(int n_angles) {
    if (n_angles < 1) throw std::invalid_argument("n_angles must be >= 1");
    std::vector<double> angles(static_cast<std::size_t>(n_angles));
    for (int k = 0; k < n_angles; ++k) angles[k] = k * std::numbers::pi / n_angles;
    return angles;
}

ScanGeometry derive_geometry(int side_px, double pixel_size, int n_angles) {
    if (side_px < 1) throw std::invalid_argument("derive_geometry: side_px must be positive");
    ScanGeometry geom;
    geom.angles_rad = full_angle_set(n_angles);
    int n_det = static_cast<int>(std::ceil(side_px * std::numbers::sqrt2));
    if (n_det % 2 != 0) ++n_det;
    geom.n_det = n_det;
    geom.det_spacing = pixel_size;
    return geom;
}

ScanGeometry derive_geometry(const ImageGrid& image, int n_angles) {
    return derive_geometry(image.side_px(), image.pixel_size(), n_angles);
}

}  // namespace tomo
