#pragma once

#include "kaczmarz/dense_matrix.hpp"

namespace kaczmarz::kernels::detail {

void check_gemm(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out);
void check_gemm_tn(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out);
void check_gemm_nt(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out);
void check_same(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace kaczmarz::kernels::detail
