#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/rng.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

// Low-rank synthetic factors A = U1 D1 V1^T (m x p, rank r1), B = U2 D2 V2^T (q x n, rank r2).
struct TypeISpec {
    std::size_t m = 0;
    std::size_t p = 0;
    std::size_t r1 = 0;
    std::size_t q = 0;
    std::size_t n = 0;
    std::size_t r2 = 0;
    std::uint64_t seed = 0;
};

struct MatrixPair {
    DenseMatrix a;
    DenseMatrix b;
};

// Columns of a standard-normal rows x cols matrix orthonormalized by Householder QR,
// each column signed so its first nonzero entry is positive.
DenseMatrix random_orthonormal_columns(std::size_t rows, std::size_t cols, SeededRng& rng);

// Throws InvalidArgument when r1 > min(m, p), r2 > min(q, n), or any size is zero.
MatrixPair gen_type1(const TypeISpec& spec);
// i.i.d. standard normal A (m x p) and B (q x n).
MatrixPair gen_type2(std::size_t m, std::size_t p, std::size_t q, std::size_t n,
                     std::uint64_t seed);

struct GeneratedProblem {
    Problem problem;     // x_star = pinv(A) C pinv(B)
    DenseMatrix x_drawn; // the standard-normal X with C = A X B
};

// Draws X ~ N(0,1), sets C = A X B and X* = pinv(A) C pinv(B).
GeneratedProblem make_problem(Operand a, Operand b, std::uint64_t seed);

struct MinNormResult {
    DenseMatrix x;
    double consistency_residual;  // ||pinv(A) A C B pinv(B) - C||_F / ||C||_F (0 when C = 0)
    bool consistent;              // consistency_residual <= 1e-6
};

// A^+ C B^+ together with a consistency diagnostic.
MinNormResult min_norm_solution(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c);

// a_ij = 1/(2r-1) for |i-j| <= r.
DenseMatrix uniform_toeplitz(std::size_t n, std::size_t r);
// b_ij = exp(-(i-j)^2 / (2 sigma^2)) / (sigma sqrt(2 pi)) for |i-j| <= r.
DenseMatrix gaussian_toeplitz(std::size_t n, std::size_t r, double sigma);

struct BlurSpec {
    std::size_t n = 0;
    std::size_t r = 3;
    double sigma = 7.0;
};

class GrayImage {
public:
    GrayImage() = default;
    // Throws InvalidArgument if any pixel lies outside [0, max_value].
    GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels, double max_value);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    double max_value() const noexcept { return max_value_; }
    std::span<const double> pixels() const noexcept { return pixels_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return pixels_[i * width_ + j]; }

    DenseMatrix to_matrix() const;
    // Clamps to [0, max_value].
    static GrayImage from_matrix(const DenseMatrix& m, double max_value);

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> pixels_;
    double max_value_ = 255.0;
};

// 10 log10(max(reference)^2 / MSE); +infinity when the images are identical.
// Throws DimensionMismatch or ZeroMatrixError (all-zero reference).
double psnr(const DenseMatrix& reference, const DenseMatrix& restored);
double psnr(const GrayImage& reference, const GrayImage& restored);

// A = uniform_toeplitz(n, r), B = gaussian_toeplitz(n, r, sigma), C = A X B.
// Throws InvalidArgument for a non-square image or one whose side differs from spec.n
// (spec.n = 0 takes the image side).
Problem blur_problem(const DenseMatrix& image, const BlurSpec& spec);

// Alternating square tiles of 0 and max_value, tile side `tile`.
GrayImage checkerboard(std::size_t n, std::size_t tile, double max_value = 255.0);

}  // namespace kaczmarz
