#include "tomo/metrics.hpp"
#include "tomo/phantom.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tomo;

namespace {

// Textbook two-pass formula, written independently of the library loop.
double pearson_oracle(const RowMatrix<double>& a, const RowMatrix<double>& b) {
    const Eigen::ArrayXd x = Eigen::Map<const Eigen::ArrayXd>(a.data(), a.size());
    const Eigen::ArrayXd y = Eigen::Map<const Eigen::ArrayXd>(b.data(), b.size());
    const Eigen::ArrayXd dx = x - x.mean();
    const Eigen::ArrayXd dy = y - y.mean();
    return (dx * dy).sum() / std::sqrt((dx * dx).sum() * (dy * dy).sum());
}

ImageGrid shifted(const ImageGrid& img, int dr, int dc) {
    const int n = img.side_px();
    ImageGrid out(n, img.pixel_size());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out((r + dr) % n, (c + dc) % n) = img(r, c);
    }
    return out;
}

ImageGrid ellipses(std::uint64_t seed) { return make_phantom({PhantomKind::RandomEllipses, seed, 8, 64}); }

}  // namespace

TEST(Pearson, Basics) {
    const auto a = make_shepp_logan(64);
    EXPECT_DOUBLE_EQ(pearson_r(a, a), 1.0);
    ImageGrid neg(64);
    neg.values() = -a.values();
    EXPECT_DOUBLE_EQ(pearson_r(a, neg), -1.0);
    EXPECT_THROW(pearson_r(ImageGrid(8), ImageGrid(8)), UndefinedCorrelation);
    EXPECT_EQ(pearson_r(ImageGrid(64), a), 0.0);
    EXPECT_THROW(pearson_r(ImageGrid(8), ImageGrid(9)), std::invalid_argument);
}

TEST(Pearson, CheckerboardOracle) {
    const auto a = make_shepp_logan(128);
    const Eigen::ArrayXd flat = a.flat().array();
    const double sd = std::sqrt((flat - flat.mean()).square().mean());
    ImageGrid b(128);
    for (int r = 0; r < 128; ++r) {
        for (int c = 0; c < 128; ++c) b(r, c) = a(r, c) + ((r + c) % 2 ? sd : -sd);
    }
    EXPECT_NEAR(pearson_r(a, b), pearson_oracle(a.values(), b.values()), 1e-12);
    EXPECT_NEAR(pearson_r(a, b), std::sqrt(0.5), 0.01);
}

TEST(Pearson, AffineInvariance) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = ellipses(trial);
        ImageGrid b(64);
        for (Eigen::Index i = 0; i < b.flat().size(); ++i) b.flat()[i] = a.flat()[i] + 0.3 * n(rng);
        const double r = pearson_r(a, b);
        const double alpha = std::exp(n(rng));
        const double beta = 5 * n(rng);
        ImageGrid t(64);
        t.values() = (alpha * a.values().array() + beta).matrix();
        EXPECT_NEAR(pearson_r(t, b), r, 1e-12);
        EXPECT_NEAR(pearson_r(b, t), r, 1e-12);
    }
}

TEST(Scattering, Shapes) {
    const ScatteringNetwork net(128, {});
    EXPECT_EQ(net.n_channels(), 1 + 18 + 108);
    EXPECT_EQ(net.n_coefficients(), 127 * 16 * 16);
    EXPECT_EQ(scattering_coeffs(make_shepp_logan(128)).size(), 32512);
    ScatteringConfig global;
    global.pooling = ScatteringPooling::Global;
    EXPECT_EQ(scattering_coeffs(make_shepp_logan(128), global).size(), 127);
    EXPECT_THROW(ScatteringNetwork(100, {}), std::invalid_argument);
}

TEST(Scattering, ZeroAndHomogeneity) {
    EXPECT_EQ(scattering_coeffs(ImageGrid(64)).norm(), 0.0);
    const auto a = make_shepp_logan(64);
    ImageGrid twice(64);
    twice.values() = 2.0 * a.values();
    const Eigen::VectorXd s = scattering_coeffs(a);
    const Eigen::VectorXd s2 = scattering_coeffs(twice);
    EXPECT_TRUE(s2 == (2.0 * s).eval());
}

TEST(Scattering, LittlewoodPaleyBound) {
    for (int side : {64, 128}) {
        const auto lp = scattering_network(side, {}).littlewood_paley();
        EXPECT_GE(lp.minCoeff(), 0.5);
        EXPECT_LE(lp.maxCoeff(), 1.05);
    }
}

TEST(Scattering, PseudometricAxioms) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto a = ellipses(3 * s);
        const auto b = ellipses(3 * s + 1);
        const auto c = ellipses(3 * s + 2);
        const double ab = scattering_distance(a, b);
        EXPECT_EQ(scattering_distance(a, a), 0.0);
        EXPECT_GE(ab, 0.0);
        EXPECT_EQ(ab, scattering_distance(b, a));
        EXPECT_LE(scattering_distance(a, c), ab + scattering_distance(b, c) + 1e-12);
    }
}

TEST(Scattering, TranslationGlobalPooling) {
    ScatteringConfig cfg;
    cfg.pooling = ScatteringPooling::Global;
    const auto a = make_shepp_logan(128);
    const Eigen::VectorXd s = scattering_coeffs(a, cfg);
    const Eigen::VectorXd t = scattering_coeffs(shifted(a, 2, 2), cfg);
    EXPECT_LT((s - t).norm() / s.norm(), 0.02);
}

TEST(Scattering, TranslationWindowedPooling) {
    // Subsampled windowed maps are only locally invariant; bound measured on
    // this image and frozen.
    const auto a = make_shepp_logan(128);
    const Eigen::VectorXd s = scattering_coeffs(a);
    const Eigen::VectorXd t = scattering_coeffs(shifted(a, 2, 2));
    const double rel = (s - t).norm() / s.norm();
    RecordProperty("relative_change", std::to_string(rel));
    EXPECT_LT(rel, 0.30);
}

TEST(Metrics, ReportConsistency) {
    const auto a = ellipses(1);
    const auto b = ellipses(2);
    const auto rep = compute_metrics(a, b);
    EXPECT_EQ(rep.one_minus_r, 1.0 - rep.pearson_r);
    EXPECT_EQ(rep.scattering_l2, scattering_distance(a, b));
}
