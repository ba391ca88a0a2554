#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::grk: return "grk";
        case Method::grbk: return "grbk";
        case Method::grabk_const: return "grabk-c";
        case Method::grabk_adaptive: return "grabk-a";
        case Method::rk_kronecker: return "rk-kron";
    }
    return "unknown";
}

std::string_view to_string(WeightScheme w) noexcept {
    return w == WeightScheme::frobenius ? "frobenius" : "uniform";
}

std::string_view to_string(TerminationReason r) noexcept {
    switch (r) {
        case TerminationReason::tolerance: return "tolerance";
        case TerminationReason::max_iters: return "max_iters";
        case TerminationReason::time_limit: return "time_limit";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : {Method::grk, Method::grbk, Method::grabk_const, Method::grabk_adaptive,
                     Method::rk_kronecker}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

std::optional<WeightScheme> parse_weight_scheme(std::string_view name) noexcept {
    if (name == "frobenius") return WeightScheme::frobenius;
    if (name == "uniform") return WeightScheme::uniform;
    return std::nullopt;
}

double default_eta(Method m) noexcept { return m == Method::grabk_const ? 1.95 : 1.0; }

namespace {

bool uses_blocks(Method m) {
    return m == Method::grbk || m == Method::grabk_const || m == Method::grabk_adaptive;
}

bool uses_eta(Method m) { return m == Method::grabk_const || m == Method::grabk_adaptive; }

}  // namespace

void SolverConfig::validate(const Problem& problem) const {
    problem.validate_shapes();
    if (!(re_tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (trace_every == 0) throw InvalidArgument("trace_every must be at least 1");
    if (uses_blocks(method)) {
        if (tau1 == 0 || tau1 > problem.m()) {
            throw InvalidArgument("tau1 = " + std::to_string(tau1) + " must lie in [1, m = " +
                                  std::to_string(problem.m()) + "]");
        }
        if (tau2 == 0 || tau2 > problem.n()) {
            throw InvalidArgument("tau2 = " + std::to_string(tau2) + " must lie in [1, n = " +
                                  std::to_string(problem.n()) + "]");
        }
    }
    if (uses_eta(method)) {
        const double e = eta.value_or(default_eta(method));
        const bool extended = allow_extended_stepsize && method == Method::grabk_const;
        if (!(e > 0.0) || (!extended && !(e < 2.0))) {
            throw InvalidArgument("eta = " + std::to_string(e) + " must lie in (0, 2)");
        }
    }
}

namespace {

struct Clock {
    using time_point = std::chrono::steady_clock::time_point;
    time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Stepsize for GRABK-c: eta / (beta_A^2 beta_B^2) for Frobenius weights, the
// weight-bound form eta * u_min v_min / (u_max^2 v_max^2 gamma_A^2 gamma_B^2) otherwise.
double grabk_constant_alpha(const IterationState& state, const SolverConfig& cfg, double eta) {
    const DenseMatrix a = to_dense(state.problem().a);
    const DenseMatrix b = to_dense(state.problem().b);
    double alpha = 0.0;
    if (cfg.weights == WeightScheme::frobenius) {
        alpha = constant_stepsize(theory::beta_max(a, state.row_partition(), Axis::rows),
                                  theory::beta_max(b, state.col_partition(), Axis::cols), eta);
    } else {
        const auto w = theory::uniform_weight_bounds(state.row_partition(), state.col_partition());
        alpha = constant_stepsize(theory::gamma_max(a, state.row_partition(), Axis::rows),
                                  theory::gamma_max(b, state.col_partition(), Axis::cols), w, eta);
    }
    if (cfg.allow_extended_stepsize && eta >= 2.0) {
        const double sa = sigma_extremes(a).sigma_max;
        const double sb = sigma_extremes(b).sigma_max;
        const double fa = frobenius_norm(a);
        const double fb = frobenius_norm(b);
        const double ceiling = 2.0 * fa * fa * fb * fb / (sa * sa * sb * sb);
        if (!(alpha < ceiling)) {
            throw InvalidArgument("extended stepsize " + std::to_string(alpha) +
                                  " exceeds the ceiling " + std::to_string(ceiling));
        }
    }
    return alpha;
}

double max_of(const std::vector<double>& w) {
    double best = 0.0;
    for (double x : w) best = std::max(best, x);
    return best;
}

}  // namespace

ConvergenceReport solve(const Problem& problem, const SolverConfig& config) {
    config.validate(problem);
    const Method method = config.method;
    const bool single = method == Method::grk || method == Method::rk_kronecker;
    const std::size_t tau1 = single ? 1 : config.tau1;
    const std::size_t tau2 = single ? 1 : config.tau2;
    const double eta = config.eta.value_or(default_eta(method));
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    IterationState state(problem, tau1, tau2, config.execution);
    state.pinv_cache_enabled = config.cache_block_pinv;
    SeededRng rng(config.seed);

    ConvergenceReport report;
    report.constant_alpha = nan;
    if (method == Method::grabk_const) report.constant_alpha = grabk_constant_alpha(state, config, eta);

    // Adaptive-ratio lower bound, reported to observers only.
    double gamma_a = nan;
    double gamma_b = nan;
    if (method == Method::grabk_adaptive && config.on_step) {
        gamma_a = theory::gamma_max(to_dense(problem.a), state.row_partition(), Axis::rows);
        gamma_b = theory::gamma_max(to_dense(problem.b), state.col_partition(), Axis::cols);
    }

    DenseMatrix kron_system;
    DenseMatrix kron_rhs;
    DenseMatrix xvec;
    if (method == Method::rk_kronecker) {
        kron_system = kronecker_system(problem);
        kron_rhs = vec(problem.c);
        xvec = DenseMatrix(problem.p() * problem.q(), 1);
    }

    const double x_star_sq =
        problem.x_star ? kernels::sum_squares(*problem.x_star, config.execution) : 0.0;

    // RE against X* (absolute squared error if X* = 0), else the relative residual.
    auto error_metric = [&]() -> double {
        if (!problem.x_star) return relative_residual(problem, state.x);
        const double err = kernels::diff_sum_squares(state.x, *problem.x_star, config.execution);
        return x_star_sq > 0.0 ? err / x_star_sq : err;
    };

    Clock clock;
    auto record = [&](double metric) {
        TraceRecord r{state.k, nan, nan, clock.seconds()};
        if (problem.x_star) {
            r.relative_error = metric;
            if (config.trace_residual) r.relative_residual = relative_residual(problem, state.x);
        } else {
            r.relative_residual = metric;
        }
        report.records.push_back(r);
    };

    double metric = error_metric();
    record(metric);
    while (true) {
        if (metric < config.re_tolerance) {
            report.reason = TerminationReason::tolerance;
            break;
        }
        if (state.k >= config.max_iters) {
            report.reason = TerminationReason::max_iters;
            break;
        }
        if (config.time_limit_seconds > 0.0 && clock.seconds() >= config.time_limit_seconds) {
            report.reason = TerminationReason::time_limit;
            break;
        }

        const std::size_t bi = sample_block(state.row_distribution(), rng);
        const std::size_t bj = sample_block(state.col_distribution(), rng);
        const IndexRange rows = state.row_partition().block(bi);
        const IndexRange cols = state.col_partition().block(bj);

        double alpha = 1.0;
        double ratio = nan;
        double ratio_bound = nan;
        switch (method) {
            case Method::grk:
                grk_step(state, rows.begin, cols.begin);
                break;
            case Method::rk_kronecker:
                rk_kronecker_step(xvec, kron_system, kron_rhs, cols.begin * problem.m() + rows.begin);
                state.x = unvec(xvec, problem.p(), problem.q());
                break;
            case Method::grbk:
                grbk_step(state, rows, cols, config.rank_tol);
                break;
            case Method::grabk_const: {
                const auto u = block_weights(state, rows, Axis::rows, config.weights);
                const auto v = block_weights(state, cols, Axis::cols, config.weights);
                alpha = report.constant_alpha;
                grabk_step(state, rows, cols, u, v, alpha);
                break;
            }
            case Method::grabk_adaptive: {
                const auto u = block_weights(state, rows, Axis::rows, config.weights);
                const auto v = block_weights(state, cols, Axis::cols, config.weights);
                const GrabkDirection dir = grabk_direction(state, rows, cols, u, v);
                if (auto step = adaptive_stepsize(dir, eta)) {
                    alpha = step->alpha;
                    ratio = step->ratio;
                    auto xd = state.x.data();
                    auto gd = dir.direction.data();
                    for (std::size_t t = 0; t < xd.size(); ++t) xd[t] += alpha * gd[t];
                } else {
                    alpha = 0.0;
                }
                if (config.on_step) {
                    ratio_bound = theory::adaptive_ratio_lower_bound(max_of(u), max_of(v), gamma_a,
                                                                     gamma_b);
                }
                break;
            }
        }
        ++state.k;
        metric = error_metric();
        if (config.on_step) {
            config.on_step(StepInfo{state.k, rows, cols, alpha, ratio, ratio_bound, &state.x});
        }
        if (state.k % config.trace_every == 0) record(metric);
    }
    if (report.records.back().k != state.k) record(metric);

    report.wall_seconds = clock.seconds();
    report.iterations = state.k;
    report.final_relative_error = report.records.back().relative_error;
    report.final_relative_residual = problem.x_star ? relative_residual(problem, state.x) : metric;
    report.x = std::move(state.x);
    return report;
}

}  // namespace kaczmarz
