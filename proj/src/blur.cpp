#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/problems.hpp"

namespace kaczmarz {

DenseMatrix uniform_toeplitz(std::size_t n, std::size_t r) {
    if (n == 0 || r == 0) throw InvalidArgument("uniform_toeplitz: n and r must be positive");
    const double value = 1.0 / (2.0 * static_cast<double>(r) - 1.0);
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((i > j ? i - j : j - i) <= r) out(i, j) = value;
    return out;
}

DenseMatrix gaussian_toeplitz(std::size_t n, std::size_t r, double sigma) {
    if (n == 0 || r == 0) throw InvalidArgument("gaussian_toeplitz: n and r must be positive");
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian_toeplitz: sigma must be positive");
    const double scale = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t d = i > j ? i - j : j - i;
            if (d > r) continue;
            const double dd = static_cast<double>(d);
            out(i, j) = scale * std::exp(-dd * dd / (2.0 * sigma * sigma));
        }
    return out;
}

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels,
                     double max_value)
    : height_(height), width_(width), pixels_(std::move(pixels)), max_value_(max_value) {
    if (pixels_.size() != height * width) throw DimensionMismatch("GrayImage: pixel count");
    if (!(max_value > 0.0)) throw InvalidArgument("GrayImage: max value must be positive");
    for (double v : pixels_) {
        if (!(v >= 0.0 && v <= max_value)) {
            throw InvalidArgument("GrayImage: pixel outside [0, " + std::to_string(max_value) + "]");
        }
    }
}

DenseMatrix GrayImage::to_matrix() const { return DenseMatrix(height_, width_, pixels_); }

GrayImage GrayImage::from_matrix(const DenseMatrix& m, double max_value) {
    std::vector<double> px(m.data().begin(), m.data().end());
    for (double& v : px) v = std::clamp(v, 0.0, max_value);
    return GrayImage(m.rows(), m.cols(), std::move(px), max_value);
}

double psnr(const DenseMatrix& reference, const DenseMatrix& restored) {
    if (reference.rows() != restored.rows() || reference.cols() != restored.cols()) {
        throw DimensionMismatch("psnr: image sizes differ");
    }
    double peak = 0.0;
    for (double v : reference.data()) peak = std::max(peak, v);
    if (peak == 0.0) throw ZeroMatrixError("psnr: reference maximum is zero");
    const double mse = kernels::diff_sum_squares(reference, restored) /
                       static_cast<double>(reference.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const GrayImage& reference, const GrayImage& restored) {
    return psnr(reference.to_matrix(), restored.to_matrix());
}

Problem blur_problem(const DenseMatrix& image, const BlurSpec& spec) {
    if (image.rows() != image.cols()) {
        throw InvalidArgument("blur_problem: image is " + std::to_string(image.rows()) + "x" +
                              std::to_string(image.cols()) + ", expected square");
    }
    const std::size_t n = spec.n == 0 ? image.rows() : spec.n;
    if (n != image.rows()) throw InvalidArgument("blur_problem: image side differs from spec");
    DenseMatrix a = uniform_toeplitz(n, spec.r);
    DenseMatrix b = gaussian_toeplitz(n, spec.r, spec.sigma);
    DenseMatrix c = matmul(matmul(a, image), b);
    DenseMatrix x_star = min_norm_solution(a, b, c).x;
    return Problem{std::move(a), std::move(b), std::move(c), std::move(x_star)};
}

GrayImage checkerboard(std::size_t n, std::size_t tile, double max_value) {
    if (n == 0 || tile == 0) throw InvalidArgument("checkerboard: sizes must be positive");
    std::vector<double> px(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            px[i * n + j] = ((i / tile + j / tile) % 2 == 0) ? max_value : 0.0;
    return GrayImage(n, n, std::move(px), max_value);
}

}  // namespace kaczmarz
