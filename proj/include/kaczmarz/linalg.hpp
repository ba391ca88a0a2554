#pragma once

#include <cstddef>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/sparse_matrix.hpp"

namespace kaczmarz {

double frobenius_norm(const DenseMatrix& m);
double frobenius_norm(const SparseMatrix& m);

// Euclidean norm of each row / column.
std::vector<double> row_norms(const DenseMatrix& m);
std::vector<double> row_norms(const SparseMatrix& m);
std::vector<double> col_norms(const DenseMatrix& m);
std::vector<double> col_norms(const SparseMatrix& m);

// Thin SVD: m = U diag(sigma) V^T with U rows x k, V cols x k, k = min(rows, cols).
struct SvdFactors {
    DenseMatrix u;
    std::vector<double> sigma;  // nonincreasing, nonnegative
    DenseMatrix v;
};

// Throws ConvergenceFailure if the decomposition does not converge.
SvdFactors svd(const DenseMatrix& m);
std::vector<double> singular_values(const DenseMatrix& m);

// max(rows, cols) * eps, the relative truncation used when no tolerance is given.
double default_rank_tol(const DenseMatrix& m);

// Moore-Penrose pseudoinverse. Singular values <= rank_tol * sigma_max are dropped.
DenseMatrix pinv(const DenseMatrix& m, double rank_tol);
DenseMatrix pinv(const DenseMatrix& m);

struct SigmaExtremes {
    double sigma_max;
    double sigma_min_nonzero;
};

// Throws ZeroMatrixError for the zero matrix.
SigmaExtremes sigma_extremes(const DenseMatrix& m);
SigmaExtremes sigma_extremes(const DenseMatrix& m, double rank_tol);

// Column stacking and its inverse.
DenseMatrix vec(const DenseMatrix& x);
DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols);

// Cap on the number of entries kron() will materialize.
inline constexpr std::size_t kMaxKroneckerEntries = 1'000'000;

// Kronecker product; throws SizeLimitError above kMaxKroneckerEntries.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Convenience products (OpenMP kernels).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul(const DenseMatrix& a, const SparseMatrix& b);

}  // namespace kaczmarz
