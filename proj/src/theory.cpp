#include "kaczmarz/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"

namespace kaczmarz::theory {

namespace {

// Rows of the returned matrix are the sampled rows (Axis::rows) or the sampled
// columns (Axis::cols); singular values are unaffected by the transpose.
DenseMatrix block_as_rows(const DenseMatrix& m, const IndexRange& r, Axis axis) {
    return axis == Axis::rows ? m.row_block(r.begin, r.end) : m.col_block(r.begin, r.end).transpose();
}

std::size_t axis_dim(const DenseMatrix& m, Axis axis) {
    return axis == Axis::rows ? m.rows() : m.cols();
}

void check_partition(const DenseMatrix& m, const BlockPartition& p, Axis axis) {
    if (p.dim() != axis_dim(m, axis)) {
        throw DimensionMismatch("partition of size " + std::to_string(p.dim()) +
                                " does not match axis length " + std::to_string(axis_dim(m, axis)));
    }
}

void check_eta(double eta) {
    if (!(eta > 0.0 && eta < 2.0)) throw InvalidArgument("eta must lie in (0, 2)");
}

double sq(double x) { return x * x; }

// sigma_min^2(M) / (||M||_F^2 beta_max^2(M)) for one factor.
double block_factor(const DenseMatrix& m, const BlockPartition& p, Axis axis) {
    const double smin = sigma_extremes(m).sigma_min_nonzero;
    return sq(smin) / (sq(frobenius_norm(m)) * sq(beta_max(m, p, axis)));
}

}  // namespace

double beta_max(const DenseMatrix& m, const BlockPartition& partition, Axis axis) {
    check_partition(m, partition, axis);
    double best = 0.0;
    for (const auto& r : partition.blocks()) {
        const DenseMatrix block = block_as_rows(m, r, axis);
        const double frob = frobenius_norm(block);
        if (frob == 0.0) throw ZeroMatrixError("beta_max: zero block");
        best = std::max(best, singular_values(block).front() / frob);
    }
    return std::min(best, 1.0);
}

double gamma_max(const DenseMatrix& m, const BlockPartition& partition, Axis axis) {
    check_partition(m, partition, axis);
    double best = 0.0;
    for (const auto& r : partition.blocks()) {
        DenseMatrix block = block_as_rows(m, r, axis);
        const auto norms = row_norms(block);
        for (std::size_t i = 0; i < block.rows(); ++i) {
            if (norms[i] == 0.0) throw ZeroMatrixError("gamma_max: zero row or column");
            for (double& v : block.row(i)) v /= norms[i];
        }
        best = std::max(best, singular_values(block).front());
    }
    return best;
}

double sigma_min_sampling_scale(const DenseMatrix& m, const BlockPartition& partition, Axis axis) {
    check_partition(m, partition, axis);
    const auto norms = axis == Axis::rows ? row_norms(m) : col_norms(m);
    const auto dist = frobenius_block_probs(norms, partition);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < partition.count(); ++b) {
        const auto& r = partition.block(b);
        const double largest = *std::max_element(norms.begin() + static_cast<std::ptrdiff_t>(r.begin),
                                                 norms.begin() + static_cast<std::ptrdiff_t>(r.end));
        if (largest == 0.0) throw ZeroMatrixError("sigma_min_sampling_scale: zero block");
        best = std::min(best, std::sqrt(dist[b]) / largest);
    }
    return best;
}

double grk_rate(const DenseMatrix& a, const DenseMatrix& b) {
    const double sa = sigma_extremes(a).sigma_min_nonzero;
    const double sb = sigma_extremes(b).sigma_min_nonzero;
    return 1.0 - sq(sa) * sq(sb) / (sq(frobenius_norm(a)) * sq(frobenius_norm(b)));
}

double grbk_rate(const DenseMatrix& a, const DenseMatrix& b, const BlockPartition& rows_of_a,
                 const BlockPartition& cols_of_b) {
    return 1.0 - block_factor(a, rows_of_a, Axis::rows) * block_factor(b, cols_of_b, Axis::cols);
}

double grabk_const_rate(const DenseMatrix& a, const DenseMatrix& b,
                        const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                        double eta) {
    check_eta(eta);
    return 1.0 - eta * (2.0 - eta) * block_factor(a, rows_of_a, Axis::rows) *
                     block_factor(b, cols_of_b, Axis::cols);
}

double grabk_adaptive_rate(const DenseMatrix& a, const DenseMatrix& b,
                           const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                           double eta) {
    // Same closed form as the constant stepsize under Frobenius weights.
    return grabk_const_rate(a, b, rows_of_a, cols_of_b, eta);
}

WeightBounds frobenius_weight_bounds(const DenseMatrix& a, const DenseMatrix& b,
                                     const BlockPartition& rows_of_a,
                                     const BlockPartition& cols_of_b) {
    auto bounds = [](const std::vector<double>& norms, const BlockPartition& p) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const auto& r : p.blocks()) {
            double block = 0.0;
            for (std::size_t i = r.begin; i < r.end; ++i) block += sq(norms[i]);
            if (block == 0.0) throw ZeroMatrixError("frobenius_weight_bounds: zero block");
            for (std::size_t i = r.begin; i < r.end; ++i) {
                lo = std::min(lo, sq(norms[i]) / block);
                hi = std::max(hi, sq(norms[i]) / block);
            }
        }
        return std::pair{lo, hi};
    };
    check_partition(a, rows_of_a, Axis::rows);
    check_partition(b, cols_of_b, Axis::cols);
    const auto [ulo, uhi] = bounds(row_norms(a), rows_of_a);
    const auto [vlo, vhi] = bounds(col_norms(b), cols_of_b);
    return {ulo, uhi, vlo, vhi};
}

WeightBounds uniform_weight_bounds(const BlockPartition& rows_of_a,
                                   const BlockPartition& cols_of_b) {
    auto bounds = [](const BlockPartition& p) {
        std::size_t smallest = p.dim();
        std::size_t largest = 0;
        for (const auto& r : p.blocks()) {
            smallest = std::min(smallest, r.size());
            largest = std::max(largest, r.size());
        }
        return std::pair{1.0 / static_cast<double>(largest), 1.0 / static_cast<double>(smallest)};
    };
    const auto [ulo, uhi] = bounds(rows_of_a);
    const auto [vlo, vhi] = bounds(cols_of_b);
    return {ulo, uhi, vlo, vhi};
}

namespace {

void check_weight_bounds(const WeightBounds& w) {
    auto ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi && hi < 1.0; };
    if (!ok(w.u_min, w.u_max) || !ok(w.v_min, w.v_max)) {
        throw InvalidArgument("weight bounds must satisfy 0 < min <= max < 1");
    }
}

double spectral_product(const DenseMatrix& a, const DenseMatrix& b,
                        const BlockPartition& rows_of_a, const BlockPartition& cols_of_b) {
    return sq(sigma_min_sampling_scale(a, rows_of_a, Axis::rows)) *
           sq(sigma_min_sampling_scale(b, cols_of_b, Axis::cols)) *
           sq(sigma_extremes(a).sigma_min_nonzero) * sq(sigma_extremes(b).sigma_min_nonzero);
}

}  // namespace

double general_grabk_rate(const DenseMatrix& a, const DenseMatrix& b,
                          const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                          double eta, const WeightBounds& w) {
    check_eta(eta);
    check_weight_bounds(w);
    const double ga = gamma_max(a, rows_of_a, Axis::rows);
    const double gb = gamma_max(b, cols_of_b, Axis::cols);
    const double phi = sq(w.u_min) * sq(w.v_min) / (sq(w.u_max) * sq(w.v_max) * sq(ga) * sq(gb));
    return 1.0 - eta * (2.0 - eta) * phi * spectral_product(a, b, rows_of_a, cols_of_b);
}

double general_grabk_adaptive_rate(const DenseMatrix& a, const DenseMatrix& b,
                                   const BlockPartition& rows_of_a,
                                   const BlockPartition& cols_of_b, double eta,
                                   const WeightBounds& w) {
    check_eta(eta);
    check_weight_bounds(w);
    const double ga = gamma_max(a, rows_of_a, Axis::rows);
    const double gb = gamma_max(b, cols_of_b, Axis::cols);
    const double psi = w.u_min * w.v_min / (w.u_max * w.v_max * sq(ga) * sq(gb));
    return 1.0 - eta * (2.0 - eta) * psi * spectral_product(a, b, rows_of_a, cols_of_b);
}

double normalized_uniform_rate(const DenseMatrix& a, const DenseMatrix& b,
                               const BlockPartition& rows_of_a, const BlockPartition& cols_of_b) {
    const double ga = gamma_max(a, rows_of_a, Axis::rows);
    const double gb = gamma_max(b, cols_of_b, Axis::cols);
    const double tau1 = static_cast<double>(rows_of_a.block_size());
    const double tau2 = static_cast<double>(cols_of_b.block_size());
    const double sa = sigma_extremes(a).sigma_min_nonzero;
    const double sb = sigma_extremes(b).sigma_min_nonzero;
    return 1.0 - tau1 * tau2 / (sq(ga) * sq(gb)) * (sq(sa) / static_cast<double>(a.rows())) *
                     (sq(sb) / static_cast<double>(b.cols()));
}

double adaptive_ratio_lower_bound(double u_max, double v_max, double gamma_a, double gamma_b) {
    return 1.0 / (u_max * v_max * sq(gamma_a) * sq(gamma_b));
}

RateBundle rate_bundle(const DenseMatrix& a, const DenseMatrix& b,
                       const BlockPartition& rows_of_a, const BlockPartition& cols_of_b,
                       double eta_const, double eta_adaptive) {
    RateBundle r{};
    r.sigma_min_a = sigma_extremes(a).sigma_min_nonzero;
    r.sigma_min_b = sigma_extremes(b).sigma_min_nonzero;
    r.frob_a = frobenius_norm(a);
    r.frob_b = frobenius_norm(b);
    r.beta_max_a = beta_max(a, rows_of_a, Axis::rows);
    r.beta_max_b = beta_max(b, cols_of_b, Axis::cols);
    r.gamma_max_a = gamma_max(a, rows_of_a, Axis::rows);
    r.gamma_max_b = gamma_max(b, cols_of_b, Axis::cols);
    r.grk = grk_rate(a, b);
    r.grbk = grbk_rate(a, b, rows_of_a, cols_of_b);
    r.grabk_const = grabk_const_rate(a, b, rows_of_a, cols_of_b, eta_const);
    r.grabk_adaptive = grabk_adaptive_rate(a, b, rows_of_a, cols_of_b, eta_adaptive);
    return r;
}

}  // namespace kaczmarz::theory
