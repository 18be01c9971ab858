#pragma once

#include "tomo/image.hpp"

#include <cstdint>
#include <vector>

namespace tomo {

enum class PhantomKind { SheppLogan, RandomEllipses };

struct PhantomSpec {
    PhantomKind kind = PhantomKind::RandomEllipses;
    std::uint64_t seed = 0;
    int n_ellipses = 8;
    int side_px = 128;
    double pixel_size = 1.0;
};

/// Ellipse in coordinates normalized to the image half-side (the image
/// spans [-1, 1] in both axes). Rotation is counter-clockwise.
struct Ellipse {
    double intensity;
    double semi_x;
    double semi_y;
    double center_x;
    double center_y;
    double rotation_rad;

    bool contains(double x, double y) const;
};

/// Modified Shepp-Logan parameter table (ten ellipses).
const std::vector<Ellipse>& shepp_logan_ellipses();

/// Additive ellipse sum sampled at pixel centers, clamped to [0, 1].
ImageGrid rasterize_ellipses(const std::vector<Ellipse>& ellipses, int side_px, double pixel_size = 1.0);

ImageGrid make_shepp_logan(int side_px, double pixel_size = 1.0);

/// Ellipses drawn for a RandomEllipses spec; exposed so tests can rasterize
/// them independently.
std::vector<Ellipse> random_ellipse_set(const PhantomSpec& spec);

ImageGrid make_random_ellipses(const PhantomSpec& spec);

ImageGrid make_phantom(const PhantomSpec& spec);

/// Centered uniform disk of the given radius (pixels) and attenuation. Edge
/// pixels hold the covered area fraction, unlike the point-sampled ellipses.
ImageGrid make_disk(int side_px, double radius_px, double mu, double pixel_size = 1.0);

}  // namespace tomo
