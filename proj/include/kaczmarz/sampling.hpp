#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/rng.hpp"
#include "kaczmarz/sparse_matrix.hpp"

namespace kaczmarz {

// Half-open, 0-based index range.
struct IndexRange {
    std::size_t begin;
    std::size_t end;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const IndexRange&) const = default;
};

//
// Contiguous cover of {0, ..., dim-1}: every block has block_size entries
// except the last, which holds the remainder (between 1 and block_size).
//
class BlockPartition {
public:
    BlockPartition(std::size_t dim, std::size_t block_size);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t block_size() const noexcept { return block_size_; }
    std::size_t count() const noexcept { return blocks_.size(); }
    const IndexRange& block(std::size_t b) const { return blocks_.at(b); }
    std::span<const IndexRange> blocks() const noexcept { return blocks_; }

private:
    std::size_t dim_;
    std::size_t block_size_;
    std::vector<IndexRange> blocks_;
};

// Throws InvalidArgument when tau == 0 or tau > dim.
BlockPartition make_partition(std::size_t dim, std::size_t tau);

class CategoricalDistribution {
public:
    // Weights must be nonnegative with a positive sum; they are normalized.
    explicit CategoricalDistribution(std::vector<double> weights);

    std::size_t size() const noexcept { return probabilities_.size(); }
    std::span<const double> probabilities() const noexcept { return probabilities_; }
    std::span<const double> cumulative() const noexcept { return cumulative_; }
    double operator[](std::size_t b) const { return probabilities_.at(b); }

    // Inverse CDF: first index whose cumulative mass is >= u (zero-mass entries skipped).
    std::size_t index_for(double u) const noexcept;

private:
    std::vector<double> probabilities_;
    std::vector<double> cumulative_;
};

enum class Axis { rows, cols };

// P(block) = ||block submatrix||_F^2 / ||M||_F^2 over the chosen axis.
CategoricalDistribution frobenius_block_probs(const DenseMatrix& m, const BlockPartition& partition,
                                              Axis axis);
CategoricalDistribution frobenius_block_probs(const SparseMatrix& m,
                                              const BlockPartition& partition, Axis axis);
// Same, from precomputed row or column norms along the sampled axis.
CategoricalDistribution frobenius_block_probs(std::span<const double> axis_norms,
                                              const BlockPartition& partition);

// One uniform draw, inverse-CDF lookup.
std::size_t sample_block(const CategoricalDistribution& dist, SeededRng& rng) noexcept;

}  // namespace kaczmarz
