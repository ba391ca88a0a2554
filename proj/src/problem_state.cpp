#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

std::size_t rows(const Operand& m) {
    return std::visit([](const auto& x) { return x.rows(); }, m);
}

std::size_t cols(const Operand& m) {
    return std::visit([](const auto& x) { return x.cols(); }, m);
}

DenseMatrix to_dense(const Operand& m) {
    if (const auto* d = std::get_if<DenseMatrix>(&m)) return *d;
    return std::get<SparseMatrix>(m).to_dense();
}

namespace {

std::string shape(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

DenseMatrix row_range(const Operand& m, IndexRange r) {
    if (const auto* d = std::get_if<DenseMatrix>(&m)) return d->row_block(r.begin, r.end);
    return std::get<SparseMatrix>(m).dense_row_block(r.begin, r.end);
}

Operand transpose(const Operand& m) {
    if (const auto* d = std::get_if<DenseMatrix>(&m)) return d->transpose();
    return std::get<SparseMatrix>(m).transpose();
}

std::vector<double> operand_row_norms(const Operand& m) {
    return std::visit([](const auto& x) { return row_norms(x); }, m);
}

std::vector<double> operand_col_norms(const Operand& m) {
    return std::visit([](const auto& x) { return col_norms(x); }, m);
}

}  // namespace

void Problem::validate_shapes() const {
    if (c.rows() != m() || c.cols() != n()) {
        throw DimensionMismatch("problem: C is " + shape(c.rows(), c.cols()) + ", expected " +
                                shape(m(), n()));
    }
    if (x_star && (x_star->rows() != p() || x_star->cols() != q())) {
        throw DimensionMismatch("problem: X* is " + shape(x_star->rows(), x_star->cols()) +
                                ", expected " + shape(p(), q()));
    }
}

bool Problem::is_consistent(double tol) const {
    if (!x_star) return false;
    const DenseMatrix r = apply(*this, *x_star) - c;
    return frobenius_norm(r) <= tol * frobenius_norm(c);
}

DenseMatrix apply(const Problem& problem, const DenseMatrix& x) {
    const DenseMatrix ax = std::visit([&](const auto& a) { return matmul(a, x); }, problem.a);
    return std::visit([&](const auto& b) { return matmul(ax, b); }, problem.b);
}

IterationState::IterationState(const Problem& problem, std::size_t tau1, std::size_t tau2,
                               kernels::Execution exec)
    : x(problem.p(), problem.q()),
      problem_(&problem),
      exec_(exec),
      b_transposed_(transpose(problem.b)),
      row_norms_a_(operand_row_norms(problem.a)),
      col_norms_b_(operand_col_norms(problem.b)),
      row_partition_(problem.m(), tau1),
      col_partition_(problem.n(), tau2),
      row_dist_(frobenius_block_probs(row_norms_a_, row_partition_)),
      col_dist_(frobenius_block_probs(col_norms_b_, col_partition_)) {
    problem.validate_shapes();
}

DenseMatrix IterationState::a_rows(IndexRange r) const { return row_range(problem_->a, r); }

DenseMatrix IterationState::b_cols_transposed(IndexRange c) const {
    return row_range(b_transposed_, c);
}

DenseMatrix IterationState::c_block(IndexRange r, IndexRange c) const {
    return problem_->c.sub(r.begin, r.end, c.begin, c.end);
}

const DenseMatrix& IterationState::cached_pinv_a(IndexRange r, double rank_tol) {
    auto [it, inserted] = pinv_a_cache_.try_emplace({r.begin, r.end});
    if (inserted) it->second = pinv(a_rows(r), rank_tol);
    return it->second;
}

const DenseMatrix& IterationState::cached_pinv_bt(IndexRange c, double rank_tol) {
    auto [it, inserted] = pinv_bt_cache_.try_emplace({c.begin, c.end});
    if (inserted) it->second = pinv(b_cols_transposed(c), rank_tol);
    return it->second;
}

}  // namespace kaczmarz
