#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kaczmarz/kernels.hpp"
#include "kernels_detail.hpp"

namespace kaczmarz::kernels {

namespace parallel {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::int64_t kMinParallelWork = 1 << 15;

}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void gemm(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    detail::check_gemm(a, b, out);
    const auto rows = static_cast<std::int64_t>(a.rows());
    const std::int64_t work = rows * static_cast<std::int64_t>(a.cols() * b.cols());
#pragma omp parallel for schedule(static) if (work >= kMinParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto o = out.row(static_cast<std::size_t>(i));
        std::fill(o.begin(), o.end(), 0.0);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double s = a(static_cast<std::size_t>(i), k);
            if (s == 0.0) continue;
            auto br = b.row(k);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out) {
    detail::check_gemm(a, b, out);
    const auto rows = static_cast<std::int64_t>(a.rows());
    const std::int64_t work = rows * static_cast<std::int64_t>(a.cols() * b.cols());
#pragma omp parallel for schedule(static) if (work >= kMinParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto o = out.row(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double s = alpha * a(static_cast<std::size_t>(i), k);
            if (s == 0.0) continue;
            auto br = b.row(k);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    detail::check_gemm_tn(a, b, out);
    const auto cols = static_cast<std::int64_t>(a.cols());
    const std::int64_t work = cols * static_cast<std::int64_t>(a.rows() * b.cols());
#pragma omp parallel for schedule(static) if (work >= kMinParallelWork)
    for (std::int64_t c = 0; c < cols; ++c) {
        auto o = out.row(static_cast<std::size_t>(c));
        std::fill(o.begin(), o.end(), 0.0);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            const double s = a(r, static_cast<std::size_t>(c));
            if (s == 0.0) continue;
            auto br = b.row(r);
            for (std::size_t j = 0; j < o.size(); ++j) o[j] += s * br[j];
        }
    }
}

void gemm_nt_add(const DenseMatrix& a, const DenseMatrix& b, double alpha, DenseMatrix& out) {
    detail::check_gemm_nt(a, b, out);
    const auto rows = static_cast<std::int64_t>(a.rows());
    const std::int64_t work = rows * static_cast<std::int64_t>(a.cols() * b.rows());
#pragma omp parallel for schedule(static) if (work >= kMinParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto ar = a.row(static_cast<std::size_t>(i));
        auto o = out.row(static_cast<std::size_t>(i));
        for (std::size_t d = 0; d < b.rows(); ++d) {
            auto br = b.row(d);
            double dot = 0.0;
            for (std::size_t j = 0; j < ar.size(); ++j) dot += ar[j] * br[j];
            o[d] += alpha * dot;
        }
    }
}

double sum_squares(const DenseMatrix& a) {
    const auto rows = static_cast<std::int64_t>(a.rows());
    std::vector<double> partial(a.rows(), 0.0);
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(a.size()) >= kMinParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (double v : a.row(static_cast<std::size_t>(i))) s += v * v;
        partial[static_cast<std::size_t>(i)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

double diff_sum_squares(const DenseMatrix& a, const DenseMatrix& b) {
    detail::check_same(a, b);
    const auto rows = static_cast<std::int64_t>(a.rows());
    std::vector<double> partial(a.rows(), 0.0);
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(a.size()) >= kMinParallelWork)
    for (std::int64_t i = 0; i < rows; ++i) {
        auto ar = a.row(static_cast<std::size_t>(i));
        auto br = b.row(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t j = 0; j < ar.size(); ++j) {
            const double d = ar[j] - br[j];
            s += d * d;
        }
        partial[static_cast<std::size_t>(i)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace parallel

}  // namespace kaczmarz::kernels
