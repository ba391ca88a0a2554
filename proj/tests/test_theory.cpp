#include <gtest/gtest.h>

#include <cmath>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/theory.hpp"
#include "test_support.hpp"

using namespace kaczmarz;
using namespace kaczmarz::theory;
using kaczmarz::testing::random_matrix;

namespace {

double sq(double x) { return x * x; }

DenseMatrix row_normalized(DenseMatrix m) {
    const auto norms = row_norms(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (double& v : m.row(i)) v /= norms[i];
    return m;
}

DenseMatrix col_normalized(const DenseMatrix& m) { return row_normalized(m.transpose()).transpose(); }

}  // namespace

TEST(BetaMax, Examples) {
    const DenseMatrix a = random_matrix(6, 4, 1);
    EXPECT_NEAR(beta_max(a, make_partition(6, 1), Axis::rows), 1.0, 1e-15);
    EXPECT_NEAR(beta_max(a, make_partition(4, 1), Axis::cols), 1.0, 1e-15);
    EXPECT_NEAR(beta_max(DenseMatrix::identity(4), make_partition(4, 2), Axis::rows),
                1.0 / std::sqrt(2.0), 1e-15);
    // Orthogonal rows of equal norm inside each block of size 3.
    DenseMatrix o(6, 3);
    for (std::size_t i = 0; i < 6; ++i) o(i, i % 3) = 2.5;
    EXPECT_NEAR(beta_max(o, make_partition(6, 3), Axis::rows), 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_THROW(beta_max(DenseMatrix{{1.0}, {0.0}}, make_partition(2, 1), Axis::rows),
                 ZeroMatrixError);
}

TEST(GammaMax, Examples) {
    const DenseMatrix a = random_matrix(5, 3, 2);
    EXPECT_NEAR(gamma_max(a, make_partition(5, 1), Axis::rows), 1.0, 1e-14);
    EXPECT_NEAR(gamma_max(DenseMatrix::identity(4), make_partition(4, 2), Axis::rows), 1.0, 1e-15);
    EXPECT_THROW(gamma_max(DenseMatrix{{1.0, 0.0}, {0.0, 0.0}}, make_partition(2, 2), Axis::rows),
                 ZeroMatrixError);
}

TEST(GammaMax, RowNormalizedRelation) {
    const DenseMatrix a = row_normalized(random_matrix(8, 4, 3));
    const auto p = make_partition(8, 2);
    EXPECT_NEAR(sq(gamma_max(a, p, Axis::rows)), 2.0 * sq(beta_max(a, p, Axis::rows)), 1e-12);
    const DenseMatrix b = col_normalized(random_matrix(4, 9, 4));
    const auto q = make_partition(9, 3);
    EXPECT_NEAR(sq(gamma_max(b, q, Axis::cols)), 3.0 * sq(beta_max(b, q, Axis::cols)), 1e-12);
}

TEST(GrkRate, Examples) {
    EXPECT_DOUBLE_EQ(grk_rate(DenseMatrix::identity(2), DenseMatrix::identity(2)), 0.75);
    EXPECT_DOUBLE_EQ(grk_rate(DenseMatrix::identity(1), DenseMatrix::identity(1)), 0.0);
    const DenseMatrix a = random_matrix(6, 4, 5), b = random_matrix(4, 6, 6);
    const auto fa = svd(a), fb = svd(b);
    const double expected = 1.0 - sq(fa.sigma.back()) * sq(fb.sigma.back()) /
                                      (sq(frobenius_norm(a)) * sq(frobenius_norm(b)));
    const double r = grk_rate(a, b);
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
    EXPECT_NEAR(r, expected, 1e-14);
}

TEST(GrbkRate, SingleElementBlocksEqualGrk) {
    const DenseMatrix a = random_matrix(5, 3, 7), b = random_matrix(3, 6, 8);
    EXPECT_NEAR(grbk_rate(a, b, make_partition(5, 1), make_partition(6, 1)), grk_rate(a, b), 1e-14);
}

TEST(GrbkRate, FullBlocks) {
    const DenseMatrix a = random_matrix(6, 3, 9), b = random_matrix(3, 5, 10);
    const auto ea = sigma_extremes(a), eb = sigma_extremes(b);
    const double expected = 1.0 - sq(ea.sigma_min_nonzero / ea.sigma_max) *
                                      sq(eb.sigma_min_nonzero / eb.sigma_max);
    EXPECT_NEAR(grbk_rate(a, b, make_partition(6, 6), make_partition(5, 5)), expected, 1e-12);
}

TEST(GrbkRate, NeverWorseThanGrk) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::size_t m = 4 + s % 5, p = 2 + s % 3, q = 2 + (s + 1) % 3, n = 3 + s % 4;
        const DenseMatrix a = random_matrix(m, p, 100 + s), b = random_matrix(q, n, 200 + s);
        const double g = grk_rate(a, b);
        const double r = grbk_rate(a, b, make_partition(m, 1 + s % m), make_partition(n, 1 + s % n));
        EXPECT_LE(r, g + 1e-15);
        EXPECT_GT(r, 0.0 - 1e-15);
        EXPECT_LT(r, 1.0);
    }
}

TEST(GrabkRates, Examples) {
    const DenseMatrix a = random_matrix(6, 3, 11), b = random_matrix(3, 6, 12);
    const auto pa = make_partition(6, 2), pb = make_partition(6, 3);
    EXPECT_NEAR(grabk_const_rate(a, b, pa, pb, 1.0), grbk_rate(a, b, pa, pb), 1e-15);
    EXPECT_NEAR(grabk_adaptive_rate(a, b, pa, pb, 1.0), grbk_rate(a, b, pa, pb), 1e-15);
    EXPECT_GT(grabk_const_rate(a, b, pa, pb, 1e-9), 1.0 - 1e-8);
    EXPECT_GT(grabk_const_rate(a, b, pa, pb, 2.0 - 1e-9), 1.0 - 1e-8);
    const DenseMatrix i2 = DenseMatrix::identity(2);
    EXPECT_NEAR(grabk_const_rate(i2, i2, make_partition(2, 1), make_partition(2, 1), 1.95), 0.975625,
                1e-15);
    EXPECT_THROW(grabk_const_rate(a, b, pa, pb, 2.0), InvalidArgument);
    EXPECT_THROW(grabk_adaptive_rate(a, b, pa, pb, 0.0), InvalidArgument);
}

TEST(WeightBounds, FrobeniusAndUniform) {
    const DenseMatrix a{{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}};
    const DenseMatrix b = DenseMatrix::identity(4);
    const auto w = frobenius_weight_bounds(a, b, make_partition(3, 2), make_partition(4, 2));
    EXPECT_NEAR(w.u_min, 0.2, 1e-15);
    EXPECT_NEAR(w.u_max, 1.0, 1e-15);  // singleton last block
    EXPECT_NEAR(w.v_min, 0.5, 1e-15);
    EXPECT_NEAR(w.v_max, 0.5, 1e-15);
    const auto u = uniform_weight_bounds(make_partition(10, 4), make_partition(6, 3));
    EXPECT_DOUBLE_EQ(u.u_min, 0.25);
    EXPECT_DOUBLE_EQ(u.u_max, 0.5);
    EXPECT_DOUBLE_EQ(u.v_min, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(u.v_max, 1.0 / 3.0);
}

TEST(GeneralGrabkRate, EqualBoundsUnitGammaGivesPrefactor) {
    // Orthonormal rows/columns in every block: gamma = 1, equal row norms, phi = 1.
    const DenseMatrix a = DenseMatrix::identity(4), b = DenseMatrix::identity(4);
    const auto pa = make_partition(4, 2), pb = make_partition(4, 2);
    const auto w = frobenius_weight_bounds(a, b, pa, pb);
    EXPECT_EQ(w.u_min, w.u_max);
    const double eta = 0.7;
    const double sa = sigma_min_sampling_scale(a, pa, Axis::rows);
    const double sb = sigma_min_sampling_scale(b, pb, Axis::cols);
    const double expected = 1.0 - eta * (2.0 - eta) * sq(sa) * sq(sb);
    EXPECT_NEAR(general_grabk_rate(a, b, pa, pb, eta, w), expected, 1e-15);
    EXPECT_NEAR(sa, std::sqrt(0.5), 1e-15);
}

TEST(GeneralGrabkRate, ReducesTowardConstRateShape) {
    // Equal row norms and orthogonal block rows: phi sigma_D^2 sigma_D^2 collapses to
    // 1/(||A||^2 beta^2 ||B||^2 beta^2), the Frobenius-weight closed form.
    DenseMatrix a(4, 3), b(3, 4);
    a(0, 0) = a(1, 1) = a(2, 2) = a(3, 0) = 1.5;
    b(0, 0) = b(1, 1) = b(2, 2) = b(0, 3) = 0.8;
    const auto pa = make_partition(4, 2), pb = make_partition(4, 2);
    const auto w = frobenius_weight_bounds(a, b, pa, pb);
    EXPECT_NEAR(general_grabk_rate(a, b, pa, pb, 1.2, w), grabk_const_rate(a, b, pa, pb, 1.2), 1e-13);
}

TEST(GeneralGrabkRate, NeverBetterThanFrobeniusGuarantee) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const DenseMatrix a = random_matrix(6, 3, 300 + s), b = random_matrix(3, 8, 400 + s);
        const auto pa = make_partition(6, 3), pb = make_partition(8, 2);
        const auto w = frobenius_weight_bounds(a, b, pa, pb);
        const double general = general_grabk_rate(a, b, pa, pb, 1.0, w);
        EXPECT_LE(general, 1.0);
        EXPECT_GE(general, grabk_const_rate(a, b, pa, pb, 1.0) - 1e-14);
        const double adaptive = general_grabk_adaptive_rate(a, b, pa, pb, 1.0, w);
        EXPECT_LE(adaptive, general + 1e-14);
    }
}

TEST(GeneralGrabkRate, RejectsBadBounds) {
    const DenseMatrix a = random_matrix(4, 2, 1), b = random_matrix(2, 4, 2);
    const auto p = make_partition(4, 2);
    EXPECT_THROW(general_grabk_rate(a, b, p, p, 1.0, {0.5, 1.0, 0.5, 0.5}), InvalidArgument);
    EXPECT_THROW(general_grabk_rate(a, b, p, p, 1.0, {0.6, 0.5, 0.5, 0.5}), InvalidArgument);
    EXPECT_THROW(general_grabk_rate(a, b, p, p, 1.0, {0.0, 0.5, 0.5, 0.5}), InvalidArgument);
}

TEST(NormalizedUniformRate, MatchesFrobeniusEvaluation) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const DenseMatrix a = row_normalized(random_matrix(12, 5, 500 + s));
        const DenseMatrix b = col_normalized(random_matrix(4, 10, 600 + s));
        const auto pa = make_partition(12, 3), pb = make_partition(10, 5);
        EXPECT_NEAR(normalized_uniform_rate(a, b, pa, pb), grabk_const_rate(a, b, pa, pb, 1.0), 1e-12);
    }
}

TEST(AdaptiveRatioLowerBound, Arithmetic) {
    EXPECT_DOUBLE_EQ(adaptive_ratio_lower_bound(0.5, 0.25, 1.0, 2.0), 2.0);
}

TEST(RateBundle, AllFactorsInsideUnitInterval) {
    const DenseMatrix a = random_matrix(10, 4, 13), b = random_matrix(4, 12, 14);
    const auto r = rate_bundle(a, b, make_partition(10, 5), make_partition(12, 4), 1.95, 1.0);
    for (double f : {r.grk, r.grbk, r.grabk_const, r.grabk_adaptive}) {
        EXPECT_GT(f, 0.0);
        EXPECT_LT(f, 1.0);
    }
    EXPECT_LE(r.grbk, r.grk);
    EXPECT_GE(r.grabk_const, r.grbk);
    EXPECT_NEAR(r.grabk_adaptive, r.grbk, 1e-15);
    EXPECT_LE(r.beta_max_a, 1.0);
    EXPECT_GE(r.gamma_max_a, 1.0 - 1e-12);
}
