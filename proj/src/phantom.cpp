#include "tomo/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tomo {

namespace {

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

// 53-bit uniform in [0, 1); the standard engines are portable, the
// standard distributions are not.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(rng);
}

}  // namespace

bool Ellipse::contains(double x, double y) const {
    const double dx = x - center_x;
    const double dy = y - center_y;
    const double c = std::cos(rotation_rad);
    const double s = std::sin(rotation_rad);
    const double xr = dx * c + dy * s;
    const double yr = -dx * s + dy * c;
    return (xr * xr) / (semi_x * semi_x) + (yr * yr) / (semi_y * semi_y) <= 1.0;
}

const std::vector<Ellipse>& shepp_logan_ellipses() {
    static const std::vector<Ellipse> table = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
        {-0.2, 0.11, 0.31, 0.22, 0.0, deg(-18.0)},
        {-0.2, 0.16, 0.41, -0.22, 0.0, deg(18.0)},
        {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
        {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
        {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
        {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
        {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
        {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
    };
    return table;
}

ImageGrid rasterize_ellipses(const std::vector<Ellipse>& ellipses, int side_px, double pixel_size) {
    ImageGrid image(side_px, pixel_size);
    const double half = 0.5 * side_px;
    for (int r = 0; r < side_px; ++r) {
        const double y = (0.5 * (side_px - 1) - r) / half;
        for (int c = 0; c < side_px; ++c) {
            const double x = (c - 0.5 * (side_px - 1)) / half;
            double v = 0.0;
            for (const auto& e : ellipses) {
                if (e.contains(x, y)) v += e.intensity;
            }
            image(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return image;
}

ImageGrid make_shepp_logan(int side_px, double pixel_size) {
    if (side_px < 16) throw std::invalid_argument("make_shepp_logan: side_px must be >= 16");
    return rasterize_ellipses(shepp_logan_ellipses(), side_px, pixel_size);
}

std::vector<Ellipse> random_ellipse_set(const PhantomSpec& spec) {
    if (spec.kind != PhantomKind::RandomEllipses) {
        throw std::invalid_argument("random_ellipse_set: spec.kind must be RandomEllipses");
    }
    if (spec.n_ellipses < 1) throw std::invalid_argument("random_ellipse_set: n_ellipses must be >= 1");
    std::mt19937_64 rng(spec.seed);
    std::vector<Ellipse> ellipses;
    ellipses.reserve(static_cast<std::size_t>(spec.n_ellipses));
    for (int k = 0; k < spec.n_ellipses; ++k) {
        const double radius = 0.8 * std::sqrt(unit_uniform(rng));
        const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        Ellipse e{};
        e.center_x = radius * std::cos(phase);
        e.center_y = radius * std::sin(phase);
        e.semi_x = uniform(rng, 0.05, 0.3);
        e.semi_y = uniform(rng, 0.05, 0.3);
        e.rotation_rad = uniform(rng, 0.0, std::numbers::pi);
        e.intensity = uniform(rng, 0.2, 0.8);
        ellipses.push_back(e);
    }
    return ellipses;
}

ImageGrid make_random_ellipses(const PhantomSpec& spec) {
    if (spec.side_px < 1) throw std::invalid_argument("make_random_ellipses: side_px must be positive");
    return rasterize_ellipses(random_ellipse_set(spec), spec.side_px, spec.pixel_size);
}

ImageGrid make_phantom(const PhantomSpec& spec) {
    switch (spec.kind) {
        case PhantomKind::SheppLogan:
            return make_shepp_logan(spec.side_px, spec.pixel_size);
        case PhantomKind::RandomEllipses:
            return make_random_ellipses(spec);
    }
    throw std::invalid_argument("make_phantom: unknown kind");
}

ImageGrid make_disk(int side_px, double radius_px, double mu, double pixel_size) {
    ImageGrid image(side_px, pixel_size);
    const double c0 = 0.5 * (side_px - 1);
    const double r2 = radius_px * radius_px;
    // Boundary pixels get their covered area fraction from a 16x16 subgrid.
    constexpr int sub = 16;
    for (int r = 0; r < side_px; ++r) {
        for (int c = 0; c < side_px; ++c) {
            const double dx = std::abs(c - c0);
            const double dy = std::abs(r - c0);
            const double near_x = std::max(dx - 0.5, 0.0);
            const double near_y = std::max(dy - 0.5, 0.0);
            if (near_x * near_x + near_y * near_y >= r2) continue;
            const double far_x = dx + 0.5;
            const double far_y = dy + 0.5;
            if (far_x * far_x + far_y * far_y <= r2) {
                image(r, c) = mu;
                continue;
            }
            int inside = 0;
            for (int i = 0; i < sub; ++i) {
                const double y = r - c0 - 0.5 + (i + 0.5) / sub;
                for (int j = 0; j < sub; ++j) {
                    const double x = c - c0 - 0.5 + (j + 0.5) / sub;
                    inside += x * x + y * y <= r2;
                }
            }
            image(r, c) = mu * inside / (sub * sub);
        }
    }
    return image;
}

}  // namespace tomo
