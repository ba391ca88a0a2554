#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/kernels.hpp"
#include "kaczmarz/sampling.hpp"
#include "kaczmarz/sparse_matrix.hpp"
#include "kaczmarz/theory.hpp"

namespace kaczmarz {

// A or B of the equation A X B = C; either storage is accepted by every solver.
using Operand = std::variant<DenseMatrix, SparseMatrix>;

std::size_t rows(const Operand& m);
std::size_t cols(const Operand& m);
DenseMatrix to_dense(const Operand& m);

struct Problem {
    Operand a;                           // m x p
    Operand b;                           // q x n
    DenseMatrix c;                       // m x n
    std::optional<DenseMatrix> x_star;   // p x q, minimal-norm solution when known

    std::size_t m() const { return rows(a); }
    std::size_t p() const { return cols(a); }
    std::size_t q() const { return rows(b); }
    std::size_t n() const { return cols(b); }

    // Throws DimensionMismatch when shapes disagree.
    void validate_shapes() const;
    // ||A X* B - C||_F <= tol * ||C||_F; false when x_star is absent.
    bool is_consistent(double tol = 1e-8) const;
};

// A X B for either operand storage.
DenseMatrix apply(const Problem& problem, const DenseMatrix& x);

enum class Method { grk, grbk, grabk_const, grabk_adaptive, rk_kronecker };
enum class WeightScheme { frobenius, uniform };
enum class TerminationReason { tolerance, max_iters, time_limit };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(WeightScheme w) noexcept;
std::string_view to_string(TerminationReason r) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;
std::optional<WeightScheme> parse_weight_scheme(std::string_view name) noexcept;

// 1.95 for the constant stepsize, 1.0 otherwise.
double default_eta(Method m) noexcept;

//
// Loop state shared by all step kernels: the iterate, cached row norms of A and
// column norms of B, the two partitions with their Frobenius sampling
// distributions, and an optional per-block pseudoinverse cache.
//
class IterationState {
public:
    IterationState(const Problem& problem, std::size_t tau1, std::size_t tau2,
                   kernels::Execution exec = kernels::Execution::parallel);

    const Problem& problem() const noexcept { return *problem_; }
    kernels::Execution execution() const noexcept { return exec_; }

    DenseMatrix x;
    std::size_t k = 0;

    std::span<const double> row_norms_a() const noexcept { return row_norms_a_; }
    std::span<const double> col_norms_b() const noexcept { return col_norms_b_; }
    const BlockPartition& row_partition() const noexcept { return row_partition_; }
    const BlockPartition& col_partition() const noexcept { return col_partition_; }
    const CategoricalDistribution& row_distribution() const noexcept { return row_dist_; }
    const CategoricalDistribution& col_distribution() const noexcept { return col_dist_; }

    // Dense copies of A(I, :) and B(:, J)^T.
    DenseMatrix a_rows(IndexRange rows) const;
    DenseMatrix b_cols_transposed(IndexRange cols) const;
    // C(I, J).
    DenseMatrix c_block(IndexRange rows, IndexRange cols) const;

    bool pinv_cache_enabled = false;
    // Cached pinv(A(I,:)) and pinv(B(:,J)^T), keyed by block range.
    const DenseMatrix& cached_pinv_a(IndexRange rows, double rank_tol);
    const DenseMatrix& cached_pinv_bt(IndexRange cols, double rank_tol);

private:
    const Problem* problem_;
    kernels::Execution exec_;
    Operand b_transposed_;
    std::vector<double> row_norms_a_;
    std::vector<double> col_norms_b_;
    BlockPartition row_partition_;
    BlockPartition col_partition_;
    CategoricalDistribution row_dist_;
    CategoricalDistribution col_dist_;
    std::map<std::pair<std::size_t, std::size_t>, DenseMatrix> pinv_a_cache_;
    std::map<std::pair<std::size_t, std::size_t>, DenseMatrix> pinv_bt_cache_;
};

// Rank-1 GRK update from row i of A and column j of B.
void grk_step(IterationState& state, std::size_t i, std::size_t j);

// Projection onto {X : A(I,:) X B(:,J) = C(I,J)} via block pseudoinverses.
// rank_tol is relative to each block's largest singular value; nullopt uses
// max(rows, cols) * eps.
void grbk_step(IterationState& state, IndexRange rows, IndexRange cols,
               std::optional<double> rank_tol = std::nullopt);

// Weighted average of the single-pair GRK directions over I x J, in compact form
// A(I,:)^T diag(u/||A_i||^2) R diag(v/||B_j||^2) B(:,J)^T with R = C(I,J) - A(I,:) X B(:,J).
struct GrabkDirection {
    DenseMatrix direction;            // p x q
    double weighted_residual_energy;  // sum u_i v_j r_ij^2 / (||A_i||^2 ||B_j||^2)
    bool zero_residual;               // every r_ij == 0
};

GrabkDirection grabk_direction(const IterationState& state, IndexRange rows, IndexRange cols,
                               std::span<const double> u, std::span<const double> v);

// X <- X + alpha * direction. Weights must be nonnegative and sum to 1 (within 1e-10).
void grabk_step(IterationState& state, IndexRange rows, IndexRange cols,
                std::span<const double> u, std::span<const double> v, double alpha);

// Per-index weights of one block under the given scheme.
std::vector<double> block_weights(const IterationState& state, IndexRange range, Axis axis,
                                  WeightScheme scheme);

// eta / (beta_A^2 beta_B^2)
double constant_stepsize(double beta_max_a, double beta_max_b, double eta);
// eta * u_min v_min / (u_max^2 v_max^2 gamma_A^2 gamma_B^2), for non-Frobenius weights.
double constant_stepsize(double gamma_max_a, double gamma_max_b, const theory::WeightBounds& w,
                         double eta);

struct AdaptiveStep {
    double ratio;  // L_k
    double alpha;  // eta * L_k
};

// nullopt signals that every residual in the block is zero (nothing to do).
std::optional<AdaptiveStep> adaptive_stepsize(const IterationState& state, IndexRange rows,
                                              IndexRange cols, std::span<const double> u,
                                              std::span<const double> v, double eta);
// Same, from a direction already computed for this block.
std::optional<AdaptiveStep> adaptive_stepsize(const GrabkDirection& dir, double eta);

// Classical Kaczmarz projection on one row of M x = c; updates x in place.
void rk_kronecker_step(DenseMatrix& x, const DenseMatrix& m, const DenseMatrix& c,
                       std::size_t row);
// B^T kron A, subject to the Kronecker size cap.
DenseMatrix kronecker_system(const Problem& problem);

// ||X - X*||_F^2 / ||X*||_F^2 (squared ratio). Throws ZeroMatrixError when X* = 0.
double relative_error(const DenseMatrix& x, const DenseMatrix& x_star);
// ||C - A X B||_F / ||C||_F (absolute residual when C = 0).
double relative_residual(const Problem& problem, const DenseMatrix& x);

struct StepInfo {
    std::size_t k;          // iteration number after the step
    IndexRange rows;        // sampled I
    IndexRange cols;        // sampled J
    double alpha;           // stepsize applied (1 for GRK/GRBK/RK)
    double ratio;           // L_k for the adaptive stepsize, NaN otherwise
    double ratio_bound;     // lower bound on L_k for the sampled block, NaN otherwise
    const DenseMatrix* x;   // iterate after the step
};

struct SolverConfig {
    Method method = Method::grbk;
    std::size_t tau1 = 1;
    std::size_t tau2 = 1;
    std::optional<double> eta;  // default_eta(method) when unset
    WeightScheme weights = WeightScheme::frobenius;
    std::size_t max_iters = 50000;
    double re_tolerance = 1e-6;
    std::uint64_t seed = 0;
    std::size_t trace_every = 1;
    double time_limit_seconds = 0.0;  // <= 0 disables the wall-clock cap
    bool trace_residual = true;
    bool cache_block_pinv = false;
    std::optional<double> rank_tol;
    // Lets GRABK-c use eta >= 2 up to 2 ||A||_F^2 ||B||_F^2 / (sigma_max^2(A) sigma_max^2(B));
    // convergence is not guaranteed there.
    bool allow_extended_stepsize = false;
    kernels::Execution execution = kernels::Execution::parallel;
    std::function<void(const StepInfo&)> on_step;

    // Throws InvalidArgument on an invalid combination for the given problem.
    void validate(const Problem& problem) const;
};

struct TraceRecord {
    std::size_t k;
    double relative_error;     // NaN when X* is unknown
    double relative_residual;  // NaN when not traced
    double elapsed_seconds;
};

struct ConvergenceReport {
    std::vector<TraceRecord> records;
    TerminationReason reason = TerminationReason::max_iters;
    DenseMatrix x;
    std::size_t iterations = 0;
    double final_relative_error = 0.0;     // NaN when X* is unknown
    double final_relative_residual = 0.0;
    double constant_alpha = 0.0;           // GRABK-c stepsize, NaN for other methods
    double wall_seconds = 0.0;             // iteration loop only
};

// Runs the configured method from X0 = 0. Stops when RE < tol (X* known) or the
// relative residual < tol (X* unknown), at max_iters, or at the time limit.
ConvergenceReport solve(const Problem& problem, const SolverConfig& config);

}  // namespace kaczmarz
