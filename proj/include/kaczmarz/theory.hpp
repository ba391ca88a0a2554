#pragma once

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/sampling.hpp"

namespace kaczmarz::theory {

// max over blocks of sigma_max(block) / ||block||_F, in (0, 1].
// Throws ZeroMatrixError if some block is zero.
double beta_max(const DenseMatrix& m, const BlockPartition& partition, Axis axis);

// max over blocks of sigma_max of the block with unit-normalized rows (Axis::rows)
// or columns (Axis::cols). Throws ZeroMatrixError on a zero row/column.
double gamma_max(const DenseMatrix& m, const BlockPartition& partition, Axis axis);

// Smallest singular value of the block-diagonal scaling sqrt(P(block)) * diag(1/||row||)
// under Frobenius partition sampling: min over blocks of sqrt(P(block)) / max row norm.
double sigma_min_sampling_scale(const DenseMatrix& m, const BlockPartition& partition, Axis axis);

// Expected contraction factors of E||X_k - X*||_F^2 per iteration.
double grk_rate(const DenseMatrix& a, const DenseMatrix& b);
double grbk_rate(const DenseMatrix& a, const DenseMatrix& b, const BlockPartition& rows_of_a,
                 const BlockPartition& cols_of_b);
// Frobenius weights with stepsize eta / (beta_A^2 beta_B^2), resp. eta * L_k.
double grabk_const_rate(const DenseMatrix& a, const DenseMatrix& b,
                        const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                        double eta);
double grabk_adaptive_rate(const DenseMatrix& a, const DenseMatrix& b,
                           const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                           double eta);

struct WeightBounds {
    double u_min;
    double u_max;
    double v_min;
    double v_max;
};

// Range of the Frobenius weights ||A_i||^2 / ||A_I||^2 and ||B_j||^2 / ||B_J||^2.
WeightBounds frobenius_weight_bounds(const DenseMatrix& a, const DenseMatrix& b,
                                     const BlockPartition& rows_of_a,
                                     const BlockPartition& cols_of_b);
// Range of the uniform weights 1/|I| and 1/|J|.
WeightBounds uniform_weight_bounds(const BlockPartition& rows_of_a,
                                   const BlockPartition& cols_of_b);

// Constant-stepsize bound for arbitrary weights within the given bounds.
// Requires 0 < min <= max < 1 for both axes (InvalidArgument otherwise).
double general_grabk_rate(const DenseMatrix& a, const DenseMatrix& b,
                          const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                          double eta, const WeightBounds& w);
// Adaptive-stepsize counterpart (psi = u_min v_min / (u_max v_max gamma_A^2 gamma_B^2)).
double general_grabk_adaptive_rate(const DenseMatrix& a, const DenseMatrix& b,
                                   const BlockPartition& rows_of_a,
                                   const BlockPartition& cols_of_b, double eta,
                                   const WeightBounds& w);

// Row-normalized A, column-normalized B, uniform weights, eta = 1:
// 1 - tau1 tau2 / (gamma_A^2 gamma_B^2) * sigma_min^2(A)/m * sigma_min^2(B)/n.
double normalized_uniform_rate(const DenseMatrix& a, const DenseMatrix& b,
                               const BlockPartition& rows_of_a, const BlockPartition& cols_of_b);

// Lower bound 1/(u_max v_max gamma_A^2 gamma_B^2) on the adaptive ratio L_k.
double adaptive_ratio_lower_bound(double u_max, double v_max, double gamma_a, double gamma_b);

struct RateBundle {
    double sigma_min_a;
    double sigma_min_b;
    double frob_a;
    double frob_b;
    double beta_max_a;
    double beta_max_b;
    double gamma_max_a;
    double gamma_max_b;
    double grk;
    double grbk;
    double grabk_const;
    double grabk_adaptive;
};

RateBundle rate_bundle(const DenseMatrix& a, const DenseMatrix& b,
                       const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                       double eta_const, double eta_adaptive);

}  // namespace kaczmarz::theory
