#include "kaczmarz/sampling.hpp"

#include <algorithm>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

BlockPartition::BlockPartition(std::size_t dim, std::size_t block_size)
    : dim_(dim), block_size_(block_size) {
    if (block_size == 0 || block_size > dim) {
        throw InvalidArgument("partition: block size " + std::to_string(block_size) +
                              " must lie in [1, " + std::to_string(dim) + "]");
    }
    for (std::size_t begin = 0; begin < dim; begin += block_size) {
        blocks_.push_back({begin, std::min(begin + block_size, dim)});
    }
}

BlockPartition make_partition(std::size_t dim, std::size_t tau) { return {dim, tau}; }

CategoricalDistribution::CategoricalDistribution(std::vector<double> weights)
    : probabilities_(std::move(weights)) {
    if (probabilities_.empty()) throw InvalidArgument("distribution: no categories");
    double total = 0.0;
    for (double w : probabilities_) {
        if (!(w >= 0.0)) throw InvalidArgument("distribution: negative or NaN weight");
        total += w;
    }
    if (!(total > 0.0)) throw ZeroMatrixError("distribution: all weights are zero");
    cumulative_.resize(probabilities_.size());
    double running = 0.0;
    for (std::size_t b = 0; b < probabilities_.size(); ++b) {
        probabilities_[b] /= total;
        running += probabilities_[b];
        cumulative_[b] = running;
    }
    // Pin the tail to exactly 1 so every u in [0, 1) lands on a category.
    for (std::size_t b = probabilities_.size(); b-- > 0;) {
        if (probabilities_[b] > 0.0) {
            for (std::size_t t = b; t < cumulative_.size(); ++t) cumulative_[t] = 1.0;
            break;
        }
    }
}

std::size_t CategoricalDistribution::index_for(double u) const noexcept {
    // First cumulative strictly above u: never returns a zero-mass category,
    // since such a category repeats its predecessor's cumulative value.
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

CategoricalDistribution frobenius_block_probs(std::span<const double> axis_norms,
                                              const BlockPartition& partition) {
    if (axis_norms.size() != partition.dim()) {
        throw DimensionMismatch("frobenius_block_probs: partition covers " +
                                std::to_string(partition.dim()) + " indices, axis has " +
                                std::to_string(axis_norms.size()));
    }
    std::vector<double> mass(partition.count(), 0.0);
    for (std::size_t b = 0; b < partition.count(); ++b) {
        const auto& r = partition.block(b);
        for (std::size_t i = r.begin; i < r.end; ++i) mass[b] += axis_norms[i] * axis_norms[i];
    }
    return CategoricalDistribution(std::move(mass));
}

CategoricalDistribution frobenius_block_probs(const DenseMatrix& m, const BlockPartition& partition,
                                              Axis axis) {
    const auto norms = axis == Axis::rows ? row_norms(m) : col_norms(m);
    return frobenius_block_probs(norms, partition);
}

CategoricalDistribution frobenius_block_probs(const SparseMatrix& m,
                                              const BlockPartition& partition, Axis axis) {
    const auto norms = axis == Axis::rows ? row_norms(m) : col_norms(m);
    return frobenius_block_probs(norms, partition);
}

std::size_t sample_block(const CategoricalDistribution& dist, SeededRng& rng) noexcept {
    return dist.index_for(rng.uniform());
}

}  // namespace kaczmarz
