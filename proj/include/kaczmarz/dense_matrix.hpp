#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kaczmarz {

//
// Row-major real matrix. Entries are checked for finiteness when a matrix is
// built from external data; element access afterwards is unchecked.
//
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);
    static DenseMatrix column(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    // Copies of the contiguous row range [begin, end) / column range [begin, end).
    DenseMatrix row_block(std::size_t begin, std::size_t end) const;
    DenseMatrix col_block(std::size_t begin, std::size_t end) const;
    DenseMatrix sub(std::size_t row_begin, std::size_t row_end,
                    std::size_t col_begin, std::size_t col_end) const;

    DenseMatrix transpose() const;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s) noexcept;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(double s, DenseMatrix m);
DenseMatrix operator*(DenseMatrix m, double s);

// Largest absolute entrywise difference; shapes must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace kaczmarz
