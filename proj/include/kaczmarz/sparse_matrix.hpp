#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"

namespace kaczmarz {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Compressed sparse row matrix.
class SparseMatrix {
public:
    SparseMatrix() : row_ptr_(1, 0) {}

    // Validates CSR structure: row_ptr has rows+1 nondecreasing entries starting at 0,
    // column indices strictly increasing within a row and below cols.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                 std::vector<std::size_t> col_idx, std::vector<double> values);

    // Duplicate coordinates are summed. Explicit zeros are kept.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> triplets);
    static SparseMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<const std::size_t> row_indices(std::size_t i) const noexcept {
        return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }
    std::span<const double> row_values(std::size_t i) const noexcept {
        return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
    }

    DenseMatrix to_dense() const;
    SparseMatrix transpose() const;

    // Dense copy of rows [begin, end).
    DenseMatrix dense_row_block(std::size_t begin, std::size_t end) const;

    bool operator==(const SparseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace kaczmarz
