#include "tomo/projector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tomo {

namespace {

// Visits (flat pixel index, weight) for one ray at detector offset s. Only
// rows (or columns) whose interpolation pair overlaps the image are visited.
template <typename Visit>
void trace_ray(int n, double pixel_size, double cos_t, double sin_t, double s, Visit&& visit) {
    const double center = 0.5 * (n - 1);
    const bool by_rows = std::abs(cos_t) >= std::abs(sin_t);
    // March along the major axis; the minor coordinate is affine in the index.
    const double major = by_rows ? cos_t : sin_t;
    const double step = pixel_size / std::abs(major);
    const double slope = by_rows ? sin_t / cos_t : cos_t / sin_t;
    const double start = by_rows ? (s / cos_t) / pixel_size + center - center * slope
                                 : center - (s / sin_t) / pixel_size - center * slope;

    // Indices i with -1 < start + i*slope < n.
    double lo = 0.0;
    double hi = n - 1.0;
    if (slope > 0.0) {
        lo = std::max(lo, std::floor((-1.0 - start) / slope));
        hi = std::min(hi, std::ceil((n - start) / slope));
    } else if (slope < 0.0) {
        lo = std::max(lo, std::floor((n - start) / slope));
        hi = std::min(hi, std::ceil((-1.0 - start) / slope));
    } else if (start <= -1.0 || start >= n) {
        return;
    }
    if (!(lo <= hi)) return;
    const int first = static_cast<int>(lo);
    const int last = static_cast<int>(hi);
    for (int i = first; i <= last; ++i) {
        const double u = start + i * slope;
        const double uf = std::floor(u);
        if (uf < -1.0 || uf > n - 1) continue;
        const int m = static_cast<int>(uf);
        const double frac = u - uf;
        if (by_rows) {
            if (m >= 0) visit(i * n + m, (1.0 - frac) * step);
            if (m + 1 < n) visit(i * n + m + 1, frac * step);
        } else {
            if (m >= 0) visit(m * n + i, (1.0 - frac) * step);
            if (m + 1 < n) visit((m + 1) * n + i, frac * step);
        }
    }
}

void check_coverage(const ScanGeometry& geom, int side_px, double pixel_size, const ProjectorOptions& opts) {
    geom.validate();
    if (side_px < 1) throw std::invalid_argument("projector: side_px must be positive");
    if (!geom.covers(side_px, pixel_size)) {
        throw std::invalid_argument("projector: detector extent does not cover the image diagonal");
    }
    if (opts.supersample < 1) throw std::invalid_argument("projector: supersample must be >= 1");
}

template <typename Visit>
void for_each_subray(const ScanGeometry& geom, int bin, const ProjectorOptions& opts, Visit&& visit) {
    const int ss = opts.supersample;
    const double center = geom.det_offset(bin);
    for (int k = 0; k < ss; ++k) {
        const double offset = (ss == 1) ? center : center + ((k + 0.5) / ss - 0.5) * geom.det_spacing;
        visit(offset);
    }
}

}  // namespace

Sinogram forward_project(const ImageGrid& image, const ScanGeometry& geom, const ProjectorOptions& opts) {
    const int n = image.side_px();
    check_coverage(geom, n, image.pixel_size(), opts);
    if (!image.all_finite()) throw std::invalid_argument("forward_project: image has non-finite values");

    Sinogram sino(geom);
    const double* x = image.values().data();
    const double inv_ss = 1.0 / opts.supersample;
    for (int a = 0; a < geom.n_angles(); ++a) {
        const double cos_t = std::cos(geom.angles_rad[a]);
        const double sin_t = std::sin(geom.angles_rad[a]);
        for (int bin = 0; bin < geom.n_det; ++bin) {
            double acc = 0.0;
            for_each_subray(geom, bin, opts, [&](double s) {
                trace_ray(n, image.pixel_size(), cos_t, sin_t, s, [&](int idx, double w) { acc += w * x[idx]; });
            });
            sino.values(a, bin) = acc * inv_ss;
        }
    }
    return sino;
}

ImageGrid back_project(const Sinogram& sino, int side_px, double pixel_size, const ProjectorOptions& opts) {
    const auto& geom = sino.geometry;
    check_coverage(geom, side_px, pixel_size, opts);
    if (sino.values.rows() != geom.n_angles() || sino.values.cols() != geom.n_det) {
        throw std::invalid_argument("back_project: sinogram shape does not match its geometry");
    }

    ImageGrid image(side_px, pixel_size);
    double* x = image.values().data();
    const double inv_ss = 1.0 / opts.supersample;
    for (int a = 0; a < geom.n_angles(); ++a) {
        const double cos_t = std::cos(geom.angles_rad[a]);
        const double sin_t = std::sin(geom.angles_rad[a]);
        for (int bin = 0; bin < geom.n_det; ++bin) {
            const double y = sino.values(a, bin) * inv_ss;
            if (y == 0.0) continue;
            for_each_subray(geom, bin, opts, [&](double s) {
                trace_ray(side_px, pixel_size, cos_t, sin_t, s, [&](int idx, double w) { x[idx] += w * y; });
            });
        }
    }
    return image;
}

ImageGrid back_project(const Sinogram& sino, int side_px, const ProjectorOptions& opts) {
    return back_project(sino, side_px, sino.geometry.det_spacing, opts);
}

double estimate_operator_norm(const ScanGeometry& geom, int side_px, int iters, double pixel_size,
                              const ProjectorOptions& opts) {
    if (iters < 10) throw std::invalid_argument("estimate_operator_norm: iters must be >= 10");
    const double ps = pixel_size > 0.0 ? pixel_size : geom.det_spacing;
    ImageGrid v(RowMatrix<double>::Constant(side_px, side_px, 1.0), ps);
    double estimate = 0.0;
    for (int k = 0; k < iters; ++k) {
        v.flat() /= v.flat().norm();
        const Sinogram av = forward_project(v, geom, opts);
        estimate = av.flat().norm();
        v = back_project(av, side_px, ps, opts);
        if (v.flat().norm() == 0.0) return 0.0;
    }
    return estimate;
}

}  // namespace tomo
