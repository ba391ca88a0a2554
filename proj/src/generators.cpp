#include <Eigen/QR>
#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/problems.hpp"

namespace kaczmarz {

DenseMatrix random_orthonormal_columns(std::size_t rows, std::size_t cols, SeededRng& rng) {
    if (cols > rows) throw InvalidArgument("random_orthonormal_columns: cols > rows");
    Eigen::MatrixXd g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    // Row-major draw order so the stream matches a row-major randn.
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
    DenseMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double sign = 1.0;
        for (std::size_t i = 0; i < rows; ++i) {
            const double v = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v != 0.0) {
                sign = v < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t i = 0; i < rows; ++i)
            out(i, j) = sign * q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return out;
}

namespace {

DenseMatrix low_rank(std::size_t rows, std::size_t cols, std::size_t rank, SeededRng& rng) {
    const DenseMatrix u = random_orthonormal_columns(rows, rank, rng);
    const DenseMatrix v = random_orthonormal_columns(cols, rank, rng);
    DenseMatrix ud = u;
    for (std::size_t k = 0; k < rank; ++k) {
        const double d = 1.0 + rng.uniform_open();
        for (std::size_t i = 0; i < rows; ++i) ud(i, k) *= d;
    }
    return matmul(ud, v.transpose());
}

void check_rank(std::size_t rows, std::size_t cols, std::size_t rank, const char* name) {
    if (rows == 0 || cols == 0 || rank == 0 || rank > std::min(rows, cols)) {
        throw InvalidArgument(std::string("type I: ") + name + " = " + std::to_string(rank) +
                              " must lie in [1, min(" + std::to_string(rows) + ", " +
                              std::to_string(cols) + ")]");
    }
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, SeededRng& rng) {
    DenseMatrix out(rows, cols);
    for (double& v : out.data()) v = rng.normal();
    return out;
}

}  // namespace

MatrixPair gen_type1(const TypeISpec& spec) {
    check_rank(spec.m, spec.p, spec.r1, "r1");
    check_rank(spec.q, spec.n, spec.r2, "r2");
    SeededRng rng(spec.seed);
    DenseMatrix a = low_rank(spec.m, spec.p, spec.r1, rng);
    DenseMatrix b = low_rank(spec.q, spec.n, spec.r2, rng);
    return {std::move(a), std::move(b)};
}

MatrixPair gen_type2(std::size_t m, std::size_t p, std::size_t q, std::size_t n,
                     std::uint64_t seed) {
    if (m == 0 || p == 0 || q == 0 || n == 0) throw InvalidArgument("type II: zero dimension");
    SeededRng rng(seed);
    DenseMatrix a = gaussian_matrix(m, p, rng);
    DenseMatrix b = gaussian_matrix(q, n, rng);
    return {std::move(a), std::move(b)};
}

GeneratedProblem make_problem(Operand a, Operand b, std::uint64_t seed) {
    SeededRng rng(seed);
    DenseMatrix x = gaussian_matrix(cols(a), rows(b), rng);
    Problem pb{std::move(a), std::move(b), DenseMatrix{}, std::nullopt};
    pb.c = apply(pb, x);
    pb.x_star = min_norm_solution(to_dense(pb.a), to_dense(pb.b), pb.c).x;
    return {std::move(pb), std::move(x)};
}

MinNormResult min_norm_solution(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c) {
    if (c.rows() != a.rows() || c.cols() != b.cols()) {
        throw DimensionMismatch("min_norm_solution: C does not match A rows / B columns");
    }
    const DenseMatrix pa = pinv(a);
    const DenseMatrix pb = pinv(b);
    MinNormResult out;
    out.x = matmul(matmul(pa, c), pb);
    const double cn = frobenius_norm(c);
    const DenseMatrix projected = matmul(matmul(a, out.x), b);
    out.consistency_residual = cn == 0.0 ? 0.0 : frobenius_norm(projected - c) / cn;
    out.consistent = out.consistency_residual <= 1e-6;
    return out;
}

}  // namespace kaczmarz
