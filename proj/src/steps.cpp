#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

namespace {

void check_range(IndexRange r, std::size_t dim, const char* what) {
    if (r.begin >= r.end || r.end > dim) {
        throw InvalidArgument(std::string(what) + ": block [" + std::to_string(r.begin) + ", " +
                              std::to_string(r.end) + ") invalid for dimension " +
                              std::to_string(dim));
    }
}

void check_weights(std::span<const double> w, std::size_t expected, const char* name) {
    if (w.size() != expected) {
        throw DimensionMismatch(std::string("weights ") + name + ": expected " +
                                std::to_string(expected) + " entries, got " +
                                std::to_string(w.size()));
    }
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0)) throw InvalidArgument(std::string("weights ") + name + ": negative entry");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw InvalidArgument(std::string("weights ") + name + " sum to " + std::to_string(total) +
                              ", expected 1");
    }
}

// w_i / norm_i^2, zero for zero-weight entries; a positive weight on a zero norm is an error.
std::vector<double> scaled_weights(std::span<const double> w, std::span<const double> norms,
                                   std::size_t offset, const char* what) {
    std::vector<double> out(w.size(), 0.0);
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (w[t] == 0.0) continue;
        const double nrm = norms[offset + t];
        if (nrm == 0.0) throw ZeroMatrixError(std::string(what) + " has zero norm");
        out[t] = w[t] / (nrm * nrm);
    }
    return out;
}

}  // namespace

void grk_step(IterationState& state, std::size_t i, std::size_t j) {
    const Problem& pb = state.problem();
    check_range({i, i + 1}, pb.m(), "grk_step row");
    check_range({j, j + 1}, pb.n(), "grk_step column");
    const double na = state.row_norms_a()[i];
    const double nb = state.col_norms_b()[j];
    if (na == 0.0) throw ZeroMatrixError("grk_step: row " + std::to_string(i) + " of A is zero");
    if (nb == 0.0) throw ZeroMatrixError("grk_step: column " + std::to_string(j) + " of B is zero");

    const DenseMatrix a = state.a_rows({i, i + 1});
    const DenseMatrix bt = state.b_cols_transposed({j, j + 1});
    auto ar = a.row(0);
    auto br = bt.row(0);
    DenseMatrix& x = state.x;

    // r = C_ij - a X b
    double axb = 0.0;
    for (std::size_t c = 0; c < x.rows(); ++c) {
        if (ar[c] == 0.0) continue;
        auto xr = x.row(c);
        double dot = 0.0;
        for (std::size_t d = 0; d < xr.size(); ++d) dot += xr[d] * br[d];
        axb += ar[c] * dot;
    }
    const double scale = (pb.c(i, j) - axb) / (na * na * nb * nb);
    if (scale == 0.0) return;
    for (std::size_t c = 0; c < x.rows(); ++c) {
        const double s = scale * ar[c];
        if (s == 0.0) continue;
        auto xr = x.row(c);
        for (std::size_t d = 0; d < xr.size(); ++d) xr[d] += s * br[d];
    }
}

namespace {

// R = C(I,J) - A(I,:) X B(:,J)
DenseMatrix block_residual(const IterationState& state, const DenseMatrix& a_block,
                           const DenseMatrix& bt_block, IndexRange rows, IndexRange cols) {
    const auto exec = state.execution();
    const DenseMatrix ax = kernels::gemm(a_block, state.x, exec);
    DenseMatrix r = state.c_block(rows, cols);
    kernels::gemm_nt_add(ax, bt_block, -1.0, r, exec);
    return r;
}

}  // namespace

void grbk_step(IterationState& state, IndexRange rows, IndexRange cols,
               std::optional<double> rank_tol) {
    const Problem& pb = state.problem();
    check_range(rows, pb.m(), "grbk_step rows");
    check_range(cols, pb.n(), "grbk_step columns");
    const auto exec = state.execution();

    const DenseMatrix a_block = state.a_rows(rows);
    const DenseMatrix bt_block = state.b_cols_transposed(cols);
    if (frobenius_norm(a_block) == 0.0) throw ZeroMatrixError("grbk_step: A(I,:) is zero");
    if (frobenius_norm(bt_block) == 0.0) throw ZeroMatrixError("grbk_step: B(:,J) is zero");

    const DenseMatrix r = block_residual(state, a_block, bt_block, rows, cols);

    DenseMatrix pinv_a_local;
    DenseMatrix pinv_bt_local;
    const DenseMatrix* pinv_a = nullptr;
    const DenseMatrix* pinv_bt = nullptr;
    const double tol_a = rank_tol.value_or(default_rank_tol(a_block));
    const double tol_b = rank_tol.value_or(default_rank_tol(bt_block));
    if (state.pinv_cache_enabled) {
        pinv_a = &state.cached_pinv_a(rows, tol_a);
        pinv_bt = &state.cached_pinv_bt(cols, tol_b);
    } else {
        pinv_a_local = pinv(a_block, tol_a);
        pinv_bt_local = pinv(bt_block, tol_b);
        pinv_a = &pinv_a_local;
        pinv_bt = &pinv_bt_local;
    }
    // X += pinv(A_I) R pinv(B_J), with pinv(B_J) = pinv(B_J^T)^T.
    const DenseMatrix left = kernels::gemm(*pinv_a, r, exec);
    kernels::gemm_nt_add(left, *pinv_bt, 1.0, state.x, exec);
}

GrabkDirection grabk_direction(const IterationState& state, IndexRange rows, IndexRange cols,
                               std::span<const double> u, std::span<const double> v) {
    const Problem& pb = state.problem();
    check_range(rows, pb.m(), "grabk rows");
    check_range(cols, pb.n(), "grabk columns");
    check_weights(u, rows.size(), "u");
    check_weights(v, cols.size(), "v");
    const auto exec = state.execution();

    const auto uh = scaled_weights(u, state.row_norms_a(), rows.begin, "row of A");
    const auto vh = scaled_weights(v, state.col_norms_b(), cols.begin, "column of B");

    const DenseMatrix a_block = state.a_rows(rows);
    const DenseMatrix bt_block = state.b_cols_transposed(cols);
    DenseMatrix w = block_residual(state, a_block, bt_block, rows, cols);

    GrabkDirection out{DenseMatrix(pb.p(), pb.q()), 0.0, true};
    for (std::size_t i = 0; i < w.rows(); ++i) {
        auto wr = w.row(i);
        for (std::size_t j = 0; j < wr.size(); ++j) {
            const double r = wr[j];
            if (r != 0.0) out.zero_residual = false;
            const double scale = uh[i] * vh[j];
            out.weighted_residual_energy += scale * r * r;
            wr[j] = scale * r;
        }
    }
    if (out.zero_residual) return out;
    // direction = A_I^T W B_J^T
    const DenseMatrix left = kernels::gemm_tn(a_block, w, exec);
    kernels::gemm_add(left, bt_block, 1.0, out.direction, exec);
    return out;
}

void grabk_step(IterationState& state, IndexRange rows, IndexRange cols,
                std::span<const double> u, std::span<const double> v, double alpha) {
    if (!(alpha > 0.0)) throw InvalidArgument("grabk_step: stepsize must be positive");
    const GrabkDirection dir = grabk_direction(state, rows, cols, u, v);
    if (dir.zero_residual) return;
    auto xd = state.x.data();
    auto gd = dir.direction.data();
    for (std::size_t t = 0; t < xd.size(); ++t) xd[t] += alpha * gd[t];
}

std::vector<double> block_weights(const IterationState& state, IndexRange range, Axis axis,
                                  WeightScheme scheme) {
    const auto norms = axis == Axis::rows ? state.row_norms_a() : state.col_norms_b();
    std::vector<double> w(range.size());
    if (scheme == WeightScheme::uniform) {
        for (std::size_t t = 0; t < w.size(); ++t) {
            if (norms[range.begin + t] == 0.0) {
                throw ZeroMatrixError(axis == Axis::rows ? "uniform weights: zero row of A"
                                                         : "uniform weights: zero column of B");
            }
        }
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
        return w;
    }
    double total = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        w[t] = norms[range.begin + t] * norms[range.begin + t];
        total += w[t];
    }
    if (total == 0.0) throw ZeroMatrixError("Frobenius weights: zero block");
    for (double& x : w) x /= total;
    return w;
}

double constant_stepsize(double beta_max_a, double beta_max_b, double eta) {
    return eta / (beta_max_a * beta_max_a * beta_max_b * beta_max_b);
}

double constant_stepsize(double gamma_max_a, double gamma_max_b, const theory::WeightBounds& w,
                         double eta) {
    return eta * w.u_min * w.v_min /
           (w.u_max * w.u_max * w.v_max * w.v_max * gamma_max_a * gamma_max_a * gamma_max_b *
            gamma_max_b);
}

std::optional<AdaptiveStep> adaptive_stepsize(const GrabkDirection& dir, double eta) {
    if (dir.zero_residual) return std::nullopt;
    const double denom = kernels::sum_squares(dir.direction);
    if (denom == 0.0) return std::nullopt;
    const double ratio = dir.weighted_residual_energy / denom;
    return AdaptiveStep{ratio, eta * ratio};
}

std::optional<AdaptiveStep> adaptive_stepsize(const IterationState& state, IndexRange rows,
                                              IndexRange cols, std::span<const double> u,
                                              std::span<const double> v, double eta) {
    return adaptive_stepsize(grabk_direction(state, rows, cols, u, v), eta);
}

void rk_kronecker_step(DenseMatrix& x, const DenseMatrix& m, const DenseMatrix& c,
                       std::size_t row) {
    if (x.cols() != 1 || c.cols() != 1 || m.cols() != x.rows() || m.rows() != c.rows()) {
        throw DimensionMismatch("rk_kronecker_step: incompatible shapes");
    }
    if (row >= m.rows()) throw InvalidArgument("rk_kronecker_step: row out of range");
    auto mr = m.row(row);
    auto xd = x.data();
    double dot = 0.0;
    double nrm2 = 0.0;
    for (std::size_t t = 0; t < mr.size(); ++t) {
        dot += mr[t] * xd[t];
        nrm2 += mr[t] * mr[t];
    }
    if (nrm2 == 0.0) throw ZeroMatrixError("rk_kronecker_step: zero row");
    const double scale = (c(row, 0) - dot) / nrm2;
    if (scale == 0.0) return;
    for (std::size_t t = 0; t < mr.size(); ++t) xd[t] += scale * mr[t];
}

DenseMatrix kronecker_system(const Problem& problem) {
    return kron(to_dense(problem.b).transpose(), to_dense(problem.a));
}

double relative_error(const DenseMatrix& x, const DenseMatrix& x_star) {
    const double denom = kernels::sum_squares(x_star);
    if (denom == 0.0) throw ZeroMatrixError("relative_error: X* is zero");
    return kernels::diff_sum_squares(x, x_star) / denom;
}

double relative_residual(const Problem& problem, const DenseMatrix& x) {
    const DenseMatrix r = problem.c - apply(problem, x);
    const double rn = frobenius_norm(r);
    const double cn = frobenius_norm(problem.c);
    return cn == 0.0 ? rn : rn / cn;
}

}  // namespace kaczmarz
