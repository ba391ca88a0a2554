#include <algorithm>

#include "kaczmarz/error.hpp"
#include "kaczmarz/kernels.hpp"
#include "kernels_detail.hpp"

namespace kaczmarz::kernels {

namespace detail {

void check_gemm(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out) {
    if (a.cols() != b.rows() || out.rows() != a.rows() || out.cols() != b.cols()) {
        throw DimensionMismatch("gemm: incompatible shapes");
    }
}

void check_gemm_tn(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out) {
    if (a.rows() != b.rows() || out.rows() != a.cols() || out.cols() != b.cols()) {
        throw DimensionMismatch("gemm_tn: incompatible shapes");
    }
}

void check_gemm_nt(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& out) {
    if (a.cols() != b.cols() || out.rows() != a.rows() || out.cols() != b.rows()) {
        throw DimensionMismatch("gemm_nt_add: incompatible shapes");
    }
}

void check_same(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("diff_sum_squares: incompatible shapes");
    }
}

}  // namespace detail

namespace serial {

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    detail::check_gemm(a, b, out);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto o = out.row(i);
        std::fill(o.begin(), o.end(), 0.0);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double s = a(i, k);
            if (s == 0.0) continue;
            auto br = b.row(k);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out) {
    detail::check_gemm(a, b, out);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto o = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double s = alpha * a(i, k);
            if (s == 0.0) continue;
            auto br = b.row(k);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    detail::check_gemm_tn(a, b, out);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        auto o = out.row(c);
        std::fill(o.begin(), o.end(), 0.0);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double s = a(r, c);
            if (s == 0.0) continue;
            auto br = b.row(r);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out) {
    detail::check_gemm_nt(a, b, out);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        auto o = out.row(i);
        for (std::size_t d = 0; d < b.rows(); ++d) {
            auto br = b.row(d);
            double dot = 0.0;
            for (std::size_t j = 0; j < ar.size(); ++j) dot += ar[j] * br[j];
            o[d] += alpha * dot;
        }
    }
}

double sum_squares(const DenseMatrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double partial = 0.0;
        for (double v : a.row(i)) partial += v * v;
        total += partial;
    }
    return total;
}

double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b) {
    detail::check_same(a, b);
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        auto br = b.row(i);
        double partial = 0.0;
        for (std::size_t j = 0; j < ar.size(); ++j) {
            const double d = ar[j] - br[j];
            partial += d * d;
        }
        total += partial;
    }
    return total;
}

}  // namespace serial

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b, Execution exec) {
    DenseMatrix out(a.rows(), b.cols());
    exec == Execution::serial ? serial::gemm(a, b, out) : parallel::gemm(a, b, out);
    return out;
}

void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out,
              Execution exec) {
    exec == Execution::serial ? serial::gemm_add(a, b, alpha, out)
                              : parallel::gemm_add(a, b, alpha, out);
}

DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b, Execution exec) {
    DenseMatrix out(a.cols(), b.cols());
    exec == Execution::serial ? serial::gemm_tn(a, b, out) : parallel::gemm_tn(a, b, out);
    return out;
}

void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out,
                 Execution exec) {
    exec == Execution::serial ? serial::gemm_nt_add(a, b, alpha, out)
                              : parallel::gemm_nt_add(a, b, alpha, out);
}

double sum_squares(const DenseMatrix& a, Execution exec) {
    return exec == Execution::serial ? serial::sum_squares(a) : parallel::sum_squares(a);
}

double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b, Execution exec) {
    return exec == Execution::serial ? serial::diff_sum_squares(a, b)
                                     : parallel::diff_sum_squares(a, b);
}

}  // namespace kaczmarz::kernels
