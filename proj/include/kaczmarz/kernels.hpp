#pragma once

// Dense inner loops used by every solver step.
//
// Each kernel exists twice: a plain serial reference and an OpenMP version.
// The OpenMP versions partition work by output row and keep the per-row
// accumulation order of the reference, so both produce bitwise-identical
// results; reductions sum per-row partials in row order.

#include <span>

#include "kaczmarz/dense_matrix.hpp"

namespace kaczmarz::kernels {

enum class Execution { serial, parallel };

namespace serial {

// out = a * b
void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
// out += alpha * a * b
void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out);
// out = a^T * b
void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
// out += alpha * a * b^T
void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out);
// sum of squares of all entries
double sum_squares(const DenseMatrix& a);
// sum of squares of (a - b)
double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace serial

namespace parallel {

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out);
void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out);
double sum_squares(const DenseMatrix& a);
double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b);

// Number of threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

}  // namespace parallel

// Dispatching wrappers.
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b, Execution exec = Execution::parallel);
void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out,
              Execution exec = Execution::parallel);
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b,
                    Execution exec = Execution::parallel);
void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out,
                 Execution exec = Execution::parallel);
double sum_squares(const DenseMatrix& a, Execution exec = Execution::parallel);
double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b,
                        Execution exec = Execution::parallel);

}  // namespace kaczmarz::kernels
