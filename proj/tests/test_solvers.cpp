#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/solvers.hpp"
#include "test_support.hpp"

using namespace kaczmarz;
using kaczmarz::testing::naive_product;
using kaczmarz::testing::oracle_pinv;
using kaczmarz::testing::random_matrix;

namespace {

double sq(double x) { return x * x; }

double dist_sq(const DenseMatrix& a, const DenseMatrix& b) {
    return sq(frobenius_norm(a - b));
}

double frob_inner(const DenseMatrix& a, const DenseMatrix& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.data().size(); ++t) s += a.data()[t] * b.data()[t];
    return s;
}

Problem random_problem(std::size_t m, std::size_t p, std::size_t q, std::size_t n,
                       std::uint64_t seed) {
    return make_problem(random_matrix(m, p, seed), random_matrix(q, n, seed + 1), seed + 2).problem;
}

// Term-by-term weighted sum of single-pair GRK directions.
DenseMatrix brute_force_direction(const Problem& pr, const DenseMatrix& x, IndexRange rows,
                                  IndexRange cols, const std::vector<double>& u,
                                  const std::vector<double>& v, double* energy) {
    const DenseMatrix a = to_dense(pr.a), b = to_dense(pr.b);
    const DenseMatrix axb = naive_product(naive_product(a, x), b);
    DenseMatrix out(x.rows(), x.cols());
    double e = 0.0;
    for (std::size_t i = rows.begin; i < rows.end; ++i) {
        double na = 0.0;
        for (std::size_t t = 0; t < a.cols(); ++t) na += sq(a(i, t));
        for (std::size_t j = cols.begin; j < cols.end; ++j) {
            double nb = 0.0;
            for (std::size_t t = 0; t < b.rows(); ++t) nb += sq(b(t, j));
            const double r = pr.c(i, j) - axb(i, j);
            const double w = u[i - rows.begin] * v[j - cols.begin] / (na * nb);
            e += w * r * r;
            for (std::size_t s = 0; s < out.rows(); ++s)
                for (std::size_t t = 0; t < out.cols(); ++t) out(s, t) += w * r * a(i, s) * b(t, j);
        }
    }
    if (energy) *energy = e;
    return out;
}

}  // namespace

TEST(GrkStep, FixedPointAndUnitVectors) {
    const Problem pr = random_problem(4, 3, 3, 4, 1);
    IterationState st(pr, 1, 1);
    st.x = *pr.x_star;
    grk_step(st, 2, 1);
    EXPECT_LT(max_abs_diff(st.x, *pr.x_star), 1e-12);

    Problem id{DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix{{1.0, 2.0}, {3.0, 4.0}}, {}};
    IterationState s2(id, 1, 1);
    grk_step(s2, 1, 0);
    EXPECT_EQ(s2.x, (DenseMatrix{{0.0, 0.0}, {3.0, 0.0}}));
}

TEST(GrkStep, ZeroRowRejected) {
    Problem pr{DenseMatrix{{1.0, 0.0}, {0.0, 0.0}}, DenseMatrix::identity(2), DenseMatrix(2, 2), {}};
    IterationState st(pr, 1, 1);
    EXPECT_THROW(grk_step(st, 1, 0), ZeroMatrixError);
}

TEST(GrkStep, MatchesKroneckerRowProjection) {
    const Problem pr = random_problem(4, 3, 3, 4, 2);
    const DenseMatrix m = kronecker_system(pr);
    const DenseMatrix c = vec(pr.c);
    IterationState st(pr, 1, 1);
    st.x = random_matrix(3, 3, 99);
    DenseMatrix xv = vec(st.x);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            grk_step(st, i, j);
            rk_kronecker_step(xv, m, c, j * pr.m() + i);
            ASSERT_LT(max_abs_diff(vec(st.x), xv), 1e-12);
        }
    }
}

TEST(RkKroneckerStep, ZeroResidualRowUnchangedAndMonotone) {
    const DenseMatrix m{{2.0, 1.0}, {1.0, 3.0}};
    const DenseMatrix xs = DenseMatrix::column(std::vector<double>{1.0, -1.0});
    const DenseMatrix c = naive_product(m, xs);
    DenseMatrix x = xs;
    rk_kronecker_step(x, m, c, 0);
    EXPECT_EQ(x, xs);
    x = DenseMatrix(2, 1);
    double prev = frobenius_norm(x - xs);
    for (int t = 0; t < 200; ++t) {
        rk_kronecker_step(x, m, c, static_cast<std::size_t>(t % 2));
        const double now = frobenius_norm(x - xs);
        ASSERT_LE(now, prev + 1e-15);
        prev = now;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(GrkSolve, AgreesWithKroneckerRkUnderSharedSeed) {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const Problem pr = random_problem(5, 4, 4, 6, 10 * seed);
        SolverConfig cfg;
        cfg.max_iters = 200;
        cfg.re_tolerance = 1e-300;
        cfg.seed = seed;
        std::vector<DenseMatrix> grk, rk;
        cfg.method = Method::grk;
        cfg.on_step = [&](const StepInfo& s) { grk.push_back(*s.x); };
        solve(pr, cfg);
        cfg.method = Method::rk_kronecker;
        cfg.on_step = [&](const StepInfo& s) { rk.push_back(*s.x); };
        solve(pr, cfg);
        ASSERT_EQ(grk.size(), 200u);
        ASSERT_EQ(rk.size(), 200u);
        for (std::size_t k = 0; k < grk.size(); ++k) ASSERT_LT(max_abs_diff(grk[k], rk[k]), 1e-10);
    }
}

TEST(GrbkStep, FullBlocksGiveMinimalNormSolution) {
    const Problem pr = random_problem(5, 3, 4, 6, 20);
    IterationState st(pr, 5, 6);
    grbk_step(st, {0, 5}, {0, 6});
    EXPECT_LT(max_abs_diff(st.x, *pr.x_star), 1e-10);
    grbk_step(st, {0, 5}, {0, 6});
    EXPECT_LT(max_abs_diff(st.x, *pr.x_star), 1e-10);
}

TEST(GrbkStep, MatchesIndependentPseudoinverseFormula) {
    const Problem pr = random_problem(4, 2, 2, 4, 21);
    IterationState st(pr, 2, 2);
    st.x = random_matrix(2, 2, 22);
    const DenseMatrix x0 = st.x;
    const IndexRange rows{2, 4}, cols{0, 2};
    grbk_step(st, rows, cols);
    const DenseMatrix a = to_dense(pr.a).row_block(2, 4);
    const DenseMatrix b = to_dense(pr.b).col_block(0, 2);
    const DenseMatrix r = pr.c.sub(2, 4, 0, 2) - naive_product(naive_product(a, x0), b);
    const DenseMatrix expected = x0 + naive_product(naive_product(oracle_pinv(a), r), oracle_pinv(b));
    EXPECT_LT(max_abs_diff(st.x, expected), 1e-12 * (1.0 + frobenius_norm(expected)));
}

TEST(GrbkStep, CachedPseudoinverseMatchesFresh) {
    const Problem pr = random_problem(6, 3, 3, 6, 23);
    IterationState fresh(pr, 3, 2), cached(pr, 3, 2);
    cached.pinv_cache_enabled = true;
    for (int t = 0; t < 6; ++t) {
        const IndexRange rows{static_cast<std::size_t>(3 * (t % 2)), static_cast<std::size_t>(3 * (t % 2) + 3)};
        const IndexRange cols{static_cast<std::size_t>(2 * (t % 3)), static_cast<std::size_t>(2 * (t % 3) + 2)};
        grbk_step(fresh, rows, cols);
        grbk_step(cached, rows, cols);
    }
    EXPECT_LT(max_abs_diff(fresh.x, cached.x), 1e-12);
}

TEST(GrbkStep, ProjectionInvariantsOnRankDeficientProblem) {
    const auto ab = gen_type1({40, 20, 10, 20, 40, 15, 31});
    const Problem pr = make_problem(ab.a, ab.b, 32).problem;
    const DenseMatrix& xs = *pr.x_star;
    // Below this the squared error is pure roundoff.
    const double floor = 1e-20 * sq(frobenius_norm(xs));
    IterationState st(pr, 5, 5);
    SeededRng rng(33);
    for (int t = 0; t < 200; ++t) {
        const auto rows = st.row_partition().block(sample_block(st.row_distribution(), rng));
        const auto cols = st.col_partition().block(sample_block(st.col_distribution(), rng));
        const DenseMatrix before = st.x;
        grbk_step(st, rows, cols);
        const double e0 = dist_sq(before, xs), e1 = dist_sq(st.x, xs), step = dist_sq(st.x, before);
        ASSERT_NEAR(e1, e0 - step, 1e-8 * std::max(e0, floor));
        ASSERT_LE(e1, e0 + 1e-12 * std::max(e0, floor));
        ASSERT_LE(std::abs(frob_inner(st.x - before, st.x - xs)), 1e-8 * std::max(e0, floor));
        const DenseMatrix a = to_dense(pr.a).row_block(rows.begin, rows.end);
        const DenseMatrix b = to_dense(pr.b).col_block(cols.begin, cols.end);
        const DenseMatrix cij = pr.c.sub(rows.begin, rows.end, cols.begin, cols.end);
        ASSERT_LE(frobenius_norm(naive_product(naive_product(a, st.x), b) - cij),
                  1e-8 * (1.0 + frobenius_norm(cij)));
    }
}

TEST(GrabkStep, SingleElementEqualsGrk) {
    const Problem pr = random_problem(4, 3, 3, 5, 40);
    IterationState a(pr, 1, 1), b(pr, 1, 1);
    a.x = b.x = random_matrix(3, 3, 41);
    const std::vector<double> one{1.0};
    grk_step(a, 2, 3);
    grabk_step(b, {2, 3}, {3, 4}, one, one, 1.0);
    EXPECT_LT(max_abs_diff(a.x, b.x), 1e-14);
}

TEST(GrabkStep, FixedPointForAnyWeights) {
    const Problem pr = random_problem(5, 3, 3, 5, 42);
    IterationState st(pr, 3, 2);
    st.x = *pr.x_star;
    const std::vector<double> u{0.2, 0.3, 0.5}, v{0.9, 0.1};
    grabk_step(st, {0, 3}, {2, 4}, u, v, 1.7);
    EXPECT_LT(max_abs_diff(st.x, *pr.x_star), 1e-12);
}

TEST(GrabkStep, RejectsUnnormalizedWeights) {
    const Problem pr = random_problem(4, 2, 2, 4, 43);
    IterationState st(pr, 2, 2);
    const std::vector<double> good{0.5, 0.5}, bad{0.5, 0.6};
    EXPECT_THROW(grabk_step(st, {0, 2}, {0, 2}, bad, good, 1.0), InvalidArgument);
    EXPECT_THROW(grabk_step(st, {0, 2}, {0, 2}, good, bad, 1.0), InvalidArgument);
}

TEST(GrabkStep, FrobeniusWeightsMatchCompactForm) {
    const Problem pr = random_problem(6, 4, 4, 7, 44);
    IterationState st(pr, 3, 4);
    st.x = random_matrix(4, 4, 45);
    const DenseMatrix x0 = st.x;
    const IndexRange rows{3, 6}, cols{0, 4};
    const auto u = block_weights(st, rows, Axis::rows, WeightScheme::frobenius);
    const auto v = block_weights(st, cols, Axis::cols, WeightScheme::frobenius);
    const double alpha = 1.3;
    grabk_step(st, rows, cols, u, v, alpha);

    const DenseMatrix a = to_dense(pr.a).row_block(3, 6);
    const DenseMatrix b = to_dense(pr.b).col_block(0, 4);
    const DenseMatrix r = naive_product(naive_product(a, x0), b) - pr.c.sub(3, 6, 0, 4);
    const double scale = sq(frobenius_norm(a)) * sq(frobenius_norm(b));
    const DenseMatrix compact =
        x0 - (alpha / scale) * naive_product(naive_product(a.transpose(), r), b.transpose());
    EXPECT_LT(max_abs_diff(st.x, compact), 1e-12 * (1.0 + frobenius_norm(compact)));

    const DenseMatrix brute = x0 + alpha * brute_force_direction(pr, x0, rows, cols, u, v, nullptr);
    EXPECT_LT(max_abs_diff(st.x, brute), 1e-12 * (1.0 + frobenius_norm(brute)));
}

TEST(BlockWeights, Schemes) {
    Problem pr{DenseMatrix{{1.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}}, DenseMatrix::identity(2),
               DenseMatrix(3, 2), {}};
    IterationState st(pr, 2, 2);
    const auto f = block_weights(st, {0, 2}, Axis::rows, WeightScheme::frobenius);
    EXPECT_NEAR(f[0], 0.2, 1e-15);
    EXPECT_NEAR(f[1], 0.8, 1e-15);
    const auto u = block_weights(st, {0, 2}, Axis::cols, WeightScheme::uniform);
    EXPECT_EQ(u, (std::vector<double>{0.5, 0.5}));
}

TEST(ConstantStepsize, Examples) {
    EXPECT_DOUBLE_EQ(constant_stepsize(1.0, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(constant_stepsize(1.0, 1.0, 1.95), 1.95);
    EXPECT_DOUBLE_EQ(constant_stepsize(0.5, 0.5, 1.0), 16.0);
    EXPECT_DOUBLE_EQ(constant_stepsize(1.0, 1.0, theory::WeightBounds{0.25, 0.5, 0.5, 0.5}, 1.0),
                     0.25 * 0.5 / (0.25 * 0.25));
}

TEST(AdaptiveStepsize, SingleElementRatioIsOne) {
    const Problem pr = random_problem(4, 3, 3, 4, 50);
    IterationState st(pr, 1, 1);
    st.x = random_matrix(3, 3, 51);
    const std::vector<double> one{1.0};
    const auto s = adaptive_stepsize(st, {1, 2}, {2, 3}, one, one, 1.0);
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(s->ratio, 1.0, 1e-14);
    EXPECT_NEAR(s->alpha, 1.0, 1e-14);
}

TEST(AdaptiveStepsize, ZeroResidualSignalsConvergence) {
    const Problem pr = random_problem(4, 3, 3, 4, 52);
    IterationState st(pr, 2, 2);
    st.x = *pr.x_star;
    const std::vector<double> h{0.5, 0.5};
    // Exact zero residual needs an exactly representable solution.
    Problem exact{DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix(2, 2), DenseMatrix(2, 2)};
    IterationState z(exact, 2, 2);
    EXPECT_FALSE(adaptive_stepsize(z, {0, 2}, {0, 2}, h, h, 1.0).has_value());
    EXPECT_TRUE(grabk_direction(z, {0, 2}, {0, 2}, h, h).zero_residual);
}

TEST(AdaptiveStepsize, MatchesBruteForceSummation) {
    const Problem pr = random_problem(6, 3, 3, 6, 53);
    IterationState st(pr, 3, 3);
    st.x = random_matrix(3, 3, 54);
    const IndexRange rows{3, 6}, cols{0, 3};
    const auto u = block_weights(st, rows, Axis::rows, WeightScheme::uniform);
    const auto v = block_weights(st, cols, Axis::cols, WeightScheme::uniform);
    double energy = 0.0;
    const DenseMatrix g = brute_force_direction(pr, st.x, rows, cols, u, v, &energy);
    const double expected = energy / sq(frobenius_norm(g));
    const auto s = adaptive_stepsize(st, rows, cols, u, v, 0.8);
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(s->ratio, expected, 1e-12 * expected);
    EXPECT_NEAR(s->alpha, 0.8 * expected, 1e-12 * expected);
}

TEST(AdaptiveStepsize, RatioAboveTheoreticalBound) {
    const Problem pr = random_problem(8, 4, 4, 9, 55);
    IterationState st(pr, 4, 3);
    st.x = random_matrix(4, 4, 56);
    const DenseMatrix a = to_dense(pr.a), b = to_dense(pr.b);
    const double ga = theory::gamma_max(a, st.row_partition(), Axis::rows);
    const double gb = theory::gamma_max(b, st.col_partition(), Axis::cols);
    for (std::size_t bi = 0; bi < st.row_partition().count(); ++bi) {
        for (std::size_t bj = 0; bj < st.col_partition().count(); ++bj) {
            const auto rows = st.row_partition().block(bi), cols = st.col_partition().block(bj);
            for (WeightScheme w : {WeightScheme::frobenius, WeightScheme::uniform}) {
                const auto u = block_weights(st, rows, Axis::rows, w);
                const auto v = block_weights(st, cols, Axis::cols, w);
                double umax = 0, vmax = 0;
                for (double x : u) umax = std::max(umax, x);
                for (double x : v) vmax = std::max(vmax, x);
                const auto s = adaptive_stepsize(st, rows, cols, u, v, 1.0);
                ASSERT_TRUE(s.has_value());
                EXPECT_GE(s->ratio, theory::adaptive_ratio_lower_bound(umax, vmax, ga, gb) * (1 - 1e-12));
            }
        }
    }
}

TEST(RelativeError, Examples) {
    const DenseMatrix xs = random_matrix(3, 2, 60);
    EXPECT_EQ(relative_error(xs, xs), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(DenseMatrix(3, 2), xs), 1.0);
    EXPECT_NEAR(relative_error(2.0 * xs, xs), 1.0, 1e-15);
    EXPECT_THROW(relative_error(xs, DenseMatrix(3, 2)), ZeroMatrixError);
}

TEST(Solve, ZeroRightHandSideNeedsNoIterations) {
    Problem pr{random_matrix(4, 3, 61), random_matrix(3, 4, 62), DenseMatrix(4, 4), DenseMatrix(3, 3)};
    for (Method m : {Method::grk, Method::grbk, Method::grabk_const, Method::grabk_adaptive,
                     Method::rk_kronecker}) {
        SolverConfig cfg;
        cfg.method = m;
        cfg.tau1 = cfg.tau2 = 2;
        const auto r = solve(pr, cfg);
        EXPECT_EQ(r.iterations, 0u) << to_string(m);
        EXPECT_EQ(r.reason, TerminationReason::tolerance);
        EXPECT_EQ(r.records.size(), 1u);
    }
}

TEST(Solve, FullBlockGrbkConvergesInOneIteration) {
    const Problem pr = random_problem(6, 3, 4, 5, 63);
    SolverConfig cfg;
    cfg.method = Method::grbk;
    cfg.tau1 = 6;
    cfg.tau2 = 5;
    const auto r = solve(pr, cfg);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.reason, TerminationReason::tolerance);
    EXPECT_LT(r.final_relative_error, 1e-6);
}

TEST(Solve, MaxItersAndTraceBookkeeping) {
    const Problem pr = random_problem(10, 5, 5, 10, 64);
    SolverConfig cfg;
    cfg.method = Method::grk;
    cfg.max_iters = 25;
    cfg.trace_every = 10;
    cfg.re_tolerance = 1e-300;
    const auto r = solve(pr, cfg);
    EXPECT_EQ(r.reason, TerminationReason::max_iters);
    EXPECT_EQ(r.iterations, 25u);
    std::vector<std::size_t> ks;
    for (const auto& rec : r.records) ks.push_back(rec.k);
    EXPECT_EQ(ks, (std::vector<std::size_t>{0, 10, 20, 25}));
    EXPECT_DOUBLE_EQ(r.records.front().relative_error, 1.0);
}

TEST(Solve, ResidualStoppingWithoutKnownSolution) {
    GeneratedProblem g = make_problem(random_matrix(6, 3, 65), random_matrix(3, 6, 66), 67);
    g.problem.x_star.reset();
    SolverConfig cfg;
    cfg.method = Method::grbk;
    cfg.tau1 = cfg.tau2 = 3;
    const auto r = solve(g.problem, cfg);
    EXPECT_EQ(r.reason, TerminationReason::tolerance);
    EXPECT_LT(r.final_relative_residual, 1e-6);
    EXPECT_TRUE(std::isnan(r.final_relative_error));
}

TEST(Solve, SameSeedReproducesTrace) {
    const Problem pr = random_problem(12, 6, 6, 12, 68);
    SolverConfig cfg;
    cfg.method = Method::grabk_adaptive;
    cfg.tau1 = cfg.tau2 = 4;
    cfg.seed = 5;
    const auto a = solve(pr, cfg), b = solve(pr, cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t t = 0; t < a.records.size(); ++t)
        EXPECT_EQ(a.records[t].relative_error, b.records[t].relative_error);
    EXPECT_EQ(a.x, b.x);
}

TEST(Solve, SerialAndParallelExecutionAgree) {
    const Problem pr = random_problem(30, 12, 12, 30, 69);
    SolverConfig cfg;
    cfg.method = Method::grabk_const;
    cfg.tau1 = cfg.tau2 = 10;
    cfg.max_iters = 50;
    cfg.execution = kernels::Execution::serial;
    const auto s = solve(pr, cfg);
    cfg.execution = kernels::Execution::parallel;
    const auto p = solve(pr, cfg);
    EXPECT_LT(max_abs_diff(s.x, p.x), 1e-12 * (1.0 + frobenius_norm(s.x)));
}

TEST(Solve, AdaptiveSingleElementReproducesGrk) {
    const Problem pr = random_problem(5, 3, 3, 5, 70);
    SolverConfig cfg;
    cfg.max_iters = 300;
    cfg.re_tolerance = 1e-300;
    cfg.seed = 8;
    cfg.method = Method::grk;
    const auto g = solve(pr, cfg);
    cfg.method = Method::grabk_adaptive;
    cfg.tau1 = cfg.tau2 = 1;
    const auto a = solve(pr, cfg);
    ASSERT_EQ(g.records.size(), a.records.size());
    for (std::size_t t = 0; t < g.records.size(); ++t)
        EXPECT_NEAR(g.records[t].relative_error, a.records[t].relative_error, 1e-12);
}

TEST(Solve, GrabkErrorMonotone) {
    const auto ab = gen_type1({20, 8, 5, 8, 20, 6, 71});
    const Problem pr = make_problem(ab.a, ab.b, 72).problem;
    for (Method m : {Method::grabk_const, Method::grabk_adaptive}) {
        for (double eta : {0.3, 1.0, 1.9}) {
            SolverConfig cfg;
            cfg.method = m;
            cfg.eta = eta;
            cfg.tau1 = 5;
            cfg.tau2 = 4;
            cfg.max_iters = 300;
            double prev = frobenius_norm(*pr.x_star);
            cfg.on_step = [&](const StepInfo& s) {
                const double now = frobenius_norm(*s.x - *pr.x_star);
                EXPECT_LE(now, prev + 1e-10);
                prev = now;
            };
            solve(pr, cfg);
        }
    }
}

TEST(Solve, ConvergesToMinimalNormSolution) {
    const auto ab = gen_type1({10, 6, 3, 6, 10, 4, 73});
    const GeneratedProblem g = make_problem(ab.a, ab.b, 74);
    for (Method m : {Method::grk, Method::grbk, Method::grabk_const, Method::grabk_adaptive,
                     Method::rk_kronecker}) {
        SolverConfig cfg;
        cfg.method = m;
        cfg.tau1 = 5;
        cfg.tau2 = 5;
        const auto r = solve(g.problem, cfg);
        EXPECT_EQ(r.reason, TerminationReason::tolerance) << to_string(m);
        EXPECT_LT(relative_error(r.x, *g.problem.x_star), 1e-6);
        EXPECT_LE(frobenius_norm(r.x), frobenius_norm(g.x_drawn));
    }
}

TEST(SolverConfig, Validation) {
    const Problem pr = random_problem(4, 2, 2, 4, 80);
    SolverConfig cfg;
    cfg.method = Method::grbk;
    cfg.tau1 = 5;
    EXPECT_THROW(cfg.validate(pr), InvalidArgument);
    cfg.tau1 = 2;
    cfg.re_tolerance = 0.0;
    EXPECT_THROW(cfg.validate(pr), InvalidArgument);
    cfg.re_tolerance = 1e-6;
    cfg.method = Method::grabk_const;
    cfg.eta = 2.0;
    EXPECT_THROW(cfg.validate(pr), InvalidArgument);
    cfg.allow_extended_stepsize = true;
    EXPECT_NO_THROW(cfg.validate(pr));
    cfg.method = Method::grabk_adaptive;
    EXPECT_THROW(cfg.validate(pr), InvalidArgument);
    cfg.eta = 1.0;
    cfg.trace_every = 0;
    EXPECT_THROW(cfg.validate(pr), InvalidArgument);
}

TEST(SolverConfig, ExtendedStepsizeCeiling) {
    // Orthogonal A, B: the ceiling 2||A||^2||B||^2/(s^2 s^2) equals 2 m n.
    Problem pr{DenseMatrix::identity(3), DenseMatrix::identity(3), DenseMatrix::identity(3),
               DenseMatrix::identity(3)};
    SolverConfig cfg;
    cfg.method = Method::grabk_const;
    cfg.tau1 = cfg.tau2 = 3;
    cfg.allow_extended_stepsize = true;
    cfg.eta = 2.5;  // alpha = 2.5 * 9 = 22.5 > 18
    EXPECT_THROW(solve(pr, cfg), InvalidArgument);
    cfg.tau1 = cfg.tau2 = 1;
    cfg.max_iters = 5;
    EXPECT_NO_THROW(solve(pr, cfg));  // alpha = 2.5 < 18
}

TEST(Names, RoundTrip) {
    for (Method m : {Method::grk, Method::grbk, Method::grabk_const, Method::grabk_adaptive,
                     Method::rk_kronecker})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("sor").has_value());
    EXPECT_EQ(parse_weight_scheme("uniform"), WeightScheme::uniform);
    EXPECT_DOUBLE_EQ(default_eta(Method::grabk_const), 1.95);
    EXPECT_DOUBLE_EQ(default_eta(Method::grabk_adaptive), 1.0);
}

TEST(Problem, ShapeAndConsistency) {
    Problem bad{DenseMatrix(3, 2), DenseMatrix(2, 4), DenseMatrix(3, 3), {}};
    EXPECT_THROW(bad.validate_shapes(), DimensionMismatch);
    const Problem good = random_problem(4, 3, 3, 4, 81);
    EXPECT_TRUE(good.is_consistent());
    Problem off = good;
    (*off.x_star)(0, 0) += 1.0;
    EXPECT_FALSE(off.is_consistent());
}

TEST(IterationState, CachedNormsMatch) {
    const Problem pr = random_problem(7, 3, 4, 9, 82);
    IterationState st(pr, 3, 4);
    const auto rn = row_norms(to_dense(pr.a)), cn = col_norms(to_dense(pr.b));
    for (std::size_t i = 0; i < rn.size(); ++i) EXPECT_NEAR(st.row_norms_a()[i], rn[i], 1e-12);
    for (std::size_t j = 0; j < cn.size(); ++j) EXPECT_NEAR(st.col_norms_b()[j], cn[j], 1e-12);
}

TEST(IterationState, SparseOperandsMatchDense) {
    const Problem dense = random_problem(8, 4, 4, 8, 83);
    Problem sparse = dense;
    sparse.a = SparseMatrix::from_dense(to_dense(dense.a));
    sparse.b = SparseMatrix::from_dense(to_dense(dense.b));
    SolverConfig cfg;
    cfg.method = Method::grabk_adaptive;
    cfg.tau1 = cfg.tau2 = 4;
    cfg.max_iters = 40;
    const auto d = solve(dense, cfg), s = solve(sparse, cfg);
    EXPECT_LT(max_abs_diff(d.x, s.x), 1e-12);
}
