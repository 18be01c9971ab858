#pragma once

#include "tomo/geometry.hpp"
#include "tomo/image.hpp"

namespace tomo {

/// Line-integral data, one row per projection angle, one column per detector bin.
struct Sinogram {
    ScanGeometry geometry;
    RowMatrix<double> values;

    Sinogram() = default;
    explicit Sinogram(ScanGeometry geom)
        : geometry(std::move(geom)),
          values(RowMatrix<double>::Zero(geometry.n_angles(), geometry.n_det)) {}
    Sinogram(ScanGeometry geom, RowMatrix<double> v) : geometry(std::move(geom)), values(std::move(v)) {}

    int n_angles() const { return geometry.n_angles(); }
    int n_det() const { return geometry.n_det; }

    Eigen::Map<const Eigen::VectorXd> flat() const { return {values.data(), values.size()}; }
    Eigen::Map<Eigen::VectorXd> flat() { return {values.data(), values.size()}; }
};

struct ProjectorOptions {
    /// Sub-rays per detector bin, evenly spread across the bin and averaged.
    int supersample = 1;
};

/// Joseph's ray-driven forward projection: for each ray, step along the
/// image axis most parallel to it and linearly interpolate across the other.
Sinogram forward_project(const ImageGrid& image, const ScanGeometry& geom, const ProjectorOptions& opts = {});

/// Exact transpose of forward_project (same weights, scattered back).
ImageGrid back_project(const Sinogram& sino, int side_px, double pixel_size, const ProjectorOptions& opts = {});

/// Same as above with pixel_size taken equal to the detector spacing.
ImageGrid back_project(const Sinogram& sino, int side_px, const ProjectorOptions& opts = {});

/// Power iteration on A^T A from a constant start vector. Returns
/// ||A v_k|| / ||v_k||, which is nondecreasing in iters.
double estimate_operator_norm(const ScanGeometry& geom, int side_px, int iters, double pixel_size = -1.0,
                              const ProjectorOptions& opts = {});

}  // namespace tomo
