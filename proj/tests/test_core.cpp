#include "tomo/geometry.hpp"
#include "tomo/phantom.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tomo;

namespace {

// Independent evaluation of the modified Shepp-Logan sum (Toft's table) at a
// normalized point, without clamping.
double shepp_logan_reference(double x, double y) {
    struct E { double a, b, x0, y0, phi_deg, rho; };
    const E table[] = {
        {0.69, 0.92, 0, 0, 0, 1.0},          {0.6624, 0.874, 0, -0.0184, 0, -0.8},
        {0.11, 0.31, 0.22, 0, -18, -0.2},     {0.16, 0.41, -0.22, 0, 18, -0.2},
        {0.21, 0.25, 0, 0.35, 0, 0.1},        {0.046, 0.046, 0, 0.1, 0, 0.1},
        {0.046, 0.046, 0, -0.1, 0, 0.1},      {0.046, 0.023, -0.08, -0.605, 0, 0.1},
        {0.023, 0.023, 0, -0.606, 0, 0.1},    {0.023, 0.046, 0.06, -0.605, 0, 0.1},
    };
    double v = 0;
    for (const auto& e : table) {
        const double phi = e.phi_deg * std::numbers::pi / 180;
        const double u = (x - e.x0) * std::cos(phi) + (y - e.y0) * std::sin(phi);
        const double w = -(x - e.x0) * std::sin(phi) + (y - e.y0) * std::cos(phi);
        if (u * u / (e.a * e.a) + w * w / (e.b * e.b) <= 1) v += e.rho;
    }
    return v;
}

}  // namespace

TEST(ImageGrid, RejectsBadShape) {
    EXPECT_THROW(ImageGrid(0), std::invalid_argument);
    EXPECT_THROW(ImageGrid(8, 0.0), std::invalid_argument);
    EXPECT_THROW(ImageGrid(RowMatrix<double>::Zero(3, 4), 1.0), std::invalid_argument);
    ImageGrid g(8, 0.5);
    EXPECT_EQ(g.size(), 64u);
    EXPECT_DOUBLE_EQ(g.x_of_col(0), -1.75);
    EXPECT_DOUBLE_EQ(g.y_of_row(0), 1.75);
}

TEST(SheppLogan, CenterMatchesAnalyticSum) {
    const auto img = make_shepp_logan(128);
    const double x = (64 - 63.5) / 64.0;
    const double y = (63.5 - 64) / 64.0;
    EXPECT_NEAR(img(64, 64), shepp_logan_reference(x, y), 1e-15);
    EXPECT_NEAR(img(64, 64), 0.2, 1e-12);
    EXPECT_EQ(img(0, 0), 0.0);
}

TEST(SheppLogan, WholeImageMatchesReference) {
    const auto img = make_shepp_logan(64);
    for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
            const double ref = std::clamp(shepp_logan_reference((c - 31.5) / 32, (31.5 - r) / 32), 0.0, 1.0);
            ASSERT_NEAR(img(r, c), ref, 1e-12) << r << "," << c;
        }
    }
}

TEST(SheppLogan, SmallSideInRange) {
    const auto img = make_shepp_logan(16);
    EXPECT_GE(img.values().minCoeff(), 0.0);
    EXPECT_LE(img.values().maxCoeff(), 1.0);
    EXPECT_THROW(make_shepp_logan(8), std::invalid_argument);
}

TEST(RandomEllipses, DeterministicAndSeedSensitive) {
    PhantomSpec a{PhantomKind::RandomEllipses, 7};
    PhantomSpec b{PhantomKind::RandomEllipses, 8};
    EXPECT_TRUE(make_random_ellipses(a) == make_random_ellipses(a));
    EXPECT_FALSE(make_random_ellipses(a) == make_random_ellipses(b));
}

TEST(RandomEllipses, NonzeroFractionOverSeeds) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PhantomSpec spec{PhantomKind::RandomEllipses, seed, 8, 128};
        const auto img = make_random_ellipses(spec);
        // Reference rasterizer: point test of each ellipse at pixel centers.
        const auto ellipses = random_ellipse_set(spec);
        int nonzero = 0;
        int ref_nonzero = 0;
        for (int r = 0; r < 128; ++r) {
            for (int c = 0; c < 128; ++c) {
                nonzero += img(r, c) != 0.0;
                const double x = (c - 63.5) / 64;
                const double y = (63.5 - r) / 64;
                bool inside = false;
                for (const auto& e : ellipses) inside = inside || e.contains(x, y);
                ref_nonzero += inside;
            }
        }
        EXPECT_EQ(nonzero, ref_nonzero) << seed;
        const double frac = nonzero / (128.0 * 128.0);
        EXPECT_GT(frac, 0.01) << seed;
        EXPECT_LT(frac, 0.80) << seed;
        EXPECT_GE(img.values().minCoeff(), 0.0);
        EXPECT_LE(img.values().maxCoeff(), 1.0);
    }
}

TEST(Geometry, DerivedFor128) {
    const auto g = derive_geometry(ImageGrid(128), 32);
    ASSERT_EQ(g.n_angles(), 32);
    EXPECT_EQ(g.angles_rad.front(), 0.0);
    EXPECT_NEAR(g.angles_rad.back(), 31 * std::numbers::pi / 32, 1e-15);
    EXPECT_EQ(g.n_det, 182);
    EXPECT_GE(g.n_det * g.det_spacing, 128 * std::sqrt(2.0));
    EXPECT_TRUE(g.covers(128, 1.0));

    const auto one = derive_geometry(ImageGrid(128), 1);
    ASSERT_EQ(one.n_angles(), 1);
    EXPECT_EQ(one.angles_rad[0], 0.0);
}

TEST(Geometry, ExtentScalesWithPixelSize) {
    for (int side : {16, 17, 100, 128}) {
        const auto g = derive_geometry(side, 0.03, 8);
        EXPECT_EQ(g.n_det % 2, 0);
        EXPECT_GE(g.extent(), side * 0.03 * std::sqrt(2.0) - 1e-12);
        for (double a : g.angles_rad) {
            EXPECT_GE(a, 0.0);
            EXPECT_LT(a, std::numbers::pi);
        }
    }
}

TEST(Geometry, ValidateRejectsBadAngles) {
    ScanGeometry g{{0.0, 0.5, 0.4}, 10, 1.0};
    EXPECT_THROW(g.validate(), std::invalid_argument);
    ScanGeometry h{{0.0, 4.0}, 10, 1.0};
    EXPECT_THROW(h.validate(), std::invalid_argument);
    ScanGeometry e{{0.0}, 0, 1.0};
    EXPECT_THROW(e.validate(), std::invalid_argument);
}
