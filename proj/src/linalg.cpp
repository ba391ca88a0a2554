#include "kaczmarz/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/kernels.hpp"

namespace kaczmarz {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DenseMatrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

}  // namespace

double frobenius_norm(const DenseMatrix& m) { return std::sqrt(kernels::sum_squares(m)); }

double frobenius_norm(const SparseMatrix& m) {
    double s = 0.0;
    for (double v : m.values()) s += v * v;
    return std::sqrt(s);
}

std::vector<double> row_norms(const DenseMatrix& m) {
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += v * v;
        out[i] = std::sqrt(s);
    }
    return out;
}

std::vector<double> row_norms(const SparseMatrix& m) {
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row_values(i)) s += v * v;
        out[i] = std::sqrt(s);
    }
    return out;
}

std::vector<double> col_norms(const DenseMatrix& m) {
    std::vector<double> sq(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) sq[j] += r[j] * r[j];
    }
    for (double& v : sq) v = std::sqrt(v);
    return sq;
}

std::vector<double> col_norms(const SparseMatrix& m) {
    std::vector<double> sq(m.cols(), 0.0);
    auto idx = m.col_idx();
    auto val = m.values();
    for (std::size_t k = 0; k < val.size(); ++k) sq[idx[k]] += val[k] * val[k];
    for (double& v : sq) v = std::sqrt(v);
    return sq;
}

SvdFactors svd(const DenseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("svd: empty matrix");
    Eigen::MatrixXd em = as_eigen(m);
    Eigen::BDCSVD<Eigen::MatrixXd> dec(em, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) {
        throw ConvergenceFailure("svd: decomposition of " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + " matrix did not converge");
    }
    SvdFactors f;
    f.u = from_eigen(dec.matrixU());
    f.v = from_eigen(dec.matrixV());
    const auto& s = dec.singularValues();
    f.sigma.assign(s.data(), s.data() + s.size());
    return f;
}

std::vector<double> singular_values(const DenseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) throw InvalidArgument("singular_values: empty matrix");
    Eigen::MatrixXd em = as_eigen(m);
    Eigen::BDCSVD<Eigen::MatrixXd> dec(em);
    if (dec.info() != Eigen::Success) throw ConvergenceFailure("svd: did not converge");
    const auto& s = dec.singularValues();
    return {s.data(), s.data() + s.size()};
}

double default_rank_tol(const DenseMatrix& m) {
    return static_cast<double>(std::max(m.rows(), m.cols())) *
           std::numeric_limits<double>::epsilon();
}

DenseMatrix pinv(const DenseMatrix& m, double rank_tol) {
    if (rank_tol < 0.0) throw InvalidArgument("pinv: negative rank tolerance");
    if (m.rows() == 0 || m.cols() == 0) return DenseMatrix(m.cols(), m.rows());
    const SvdFactors f = svd(m);
    DenseMatrix out(m.cols(), m.rows());
    if (f.sigma.empty() || f.sigma.front() == 0.0) return out;
    const double cutoff = rank_tol * f.sigma.front();
    // out = V diag(1/sigma) U^T over the retained singular triplets.
    for (std::size_t k = 0; k < f.sigma.size(); ++k) {
        if (f.sigma[k] <= cutoff) break;
        const double inv = 1.0 / f.sigma[k];
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const double vi = f.v(i, k) * inv;
            if (vi == 0.0) continue;
            auto o = out.row(i);
            for (std::size_t j = 0; j < m.rows(); ++j) o[j] += vi * f.u(j, k);
        }
    }
    return out;
}

DenseMatrix pinv(const DenseMatrix& m) { return pinv(m, default_rank_tol(m)); }

SigmaExtremes sigma_extremes(const DenseMatrix& m) {
    return sigma_extremes(m, default_rank_tol(m));
}

SigmaExtremes sigma_extremes(const DenseMatrix& m, double rank_tol) {
    const auto s = singular_values(m);
    if (s.empty() || s.front() == 0.0) throw ZeroMatrixError("sigma_extremes: zero matrix");
    const double cutoff = rank_tol * s.front();
    double smallest = s.front();
    for (double v : s) {
        if (v > cutoff) smallest = v;
    }
    return {s.front(), smallest};
}

DenseMatrix vec(const DenseMatrix& x) {
    DenseMatrix out(x.rows() * x.cols(), 1);
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) out(j * x.rows() + i, 0) = x(i, j);
    return out;
}

DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.cols() != 1 || v.rows() != rows * cols) {
        throw DimensionMismatch("unvec: vector length does not match target shape");
    }
    DenseMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) out(i, j) = v(j * rows + i, 0);
    return out;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows != 0 && cols > kMaxKroneckerEntries / rows) {
        throw SizeLimitError("kron: product of " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " exceeds the materialization cap");
    }
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double s = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
        }
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) { return kernels::gemm(a, b); }

DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: incompatible shapes");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto idx = a.row_indices(i);
        auto val = a.row_values(i);
        auto o = out.row(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto br = b.row(idx[k]);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += val[k] * br[j];
        }
    }
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: incompatible shapes");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        auto o = out.row(i);
        for (std::size_t k = 0; k < b.rows(); ++k) {
            if (ar[k] == 0.0) continue;
            auto idx = b.row_indices(k);
            auto val = b.row_values(k);
            for (std::size_t t = 0; t < idx.size(); ++t) o[idx[t]] += ar[k] * val[t];
        }
    }
    return out;
}

}  // namespace kaczmarz
