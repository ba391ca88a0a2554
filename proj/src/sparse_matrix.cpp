#include "kaczmarz/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0) {
        throw InvalidArgument("SparseMatrix: row pointer must have rows+1 entries starting at 0");
    }
    if (col_idx_.size() != values_.size() || row_ptr_.back() != values_.size()) {
        throw InvalidArgument("SparseMatrix: index/value arrays disagree with row pointer");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        if (row_ptr_[i + 1] < row_ptr_[i]) {
            throw InvalidArgument("SparseMatrix: row pointer decreases at row " + std::to_string(i));
        }
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            if (col_idx_[k] >= cols_) {
                throw InvalidArgument("SparseMatrix: column index out of range in row " +
                                      std::to_string(i));
            }
            if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
                throw InvalidArgument("SparseMatrix: column indices not strictly increasing in row " +
                                      std::to_string(i));
            }
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("SparseMatrix: non-finite entry");
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw InvalidArgument("SparseMatrix::from_triplets: coordinate out of range");
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> row_ptr(rows + 1, 0);
    std::vector<std::size_t> col_idx;
    std::vector<double> values;
    col_idx.reserve(triplets.size());
    values.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto& t = triplets[k];
        if (k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            values.back() += t.value;
            continue;
        }
        col_idx.push_back(t.col);
        values.push_back(t.value);
        ++row_ptr[t.row + 1];
    }
    for (std::size_t i = 0; i < rows; ++i) row_ptr[i + 1] += row_ptr[i];
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m, double drop_tol) {
    std::vector<std::size_t> row_ptr(m.rows() + 1, 0);
    std::vector<std::size_t> col_idx;
    std::vector<double> values;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) > drop_tol) {
                col_idx.push_back(j);
                values.push_back(m(i, j));
            }
        }
        row_ptr[i + 1] = values.size();
    }
    return SparseMatrix(m.rows(), m.cols(), std::move(row_ptr), std::move(col_idx),
                        std::move(values));
}

DenseMatrix SparseMatrix::to_dense() const { return dense_row_block(0, rows_); }

DenseMatrix SparseMatrix::dense_row_block(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows_) throw InvalidArgument("SparseMatrix: row range out of bounds");
    DenseMatrix out(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            out(i - begin, col_idx_[k]) = values_[k];
        }
    }
    return out;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::size_t> row_ptr(cols_ + 1, 0);
    for (std::size_t c : col_idx_) ++row_ptr[c + 1];
    for (std::size_t j = 0; j < cols_; ++j) row_ptr[j + 1] += row_ptr[j];
    std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
    std::vector<std::size_t> col_idx(nnz());
    std::vector<double> values(nnz());
    // Row-major traversal keeps the new column indices sorted.
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const std::size_t dst = next[col_idx_[k]]++;
            col_idx[dst] = i;
            values[dst] = values_[k];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace kaczmarz
