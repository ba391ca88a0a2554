#include "kaczmarz/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmarz/error.hpp"

namespace kaczmarz {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(op) + ": shape " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch("DenseMatrix: data length " + std::to_string(data_.size()) +
                                " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw InvalidArgument("DenseMatrix: non-finite entry");
    }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("DenseMatrix: ragged initializer");
        for (double v : r) {
            if (!std::isfinite(v)) throw InvalidArgument("DenseMatrix: non-finite entry");
            data_.push_back(v);
        }
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
    return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

DenseMatrix DenseMatrix::row_block(std::size_t begin, std::size_t end) const {
    return sub(begin, end, 0, cols_);
}

DenseMatrix DenseMatrix::col_block(std::size_t begin, std::size_t end) const {
    return sub(0, rows_, begin, end);
}

DenseMatrix DenseMatrix::sub(std::size_t row_begin, std::size_t row_end,
                             std::size_t col_begin, std::size_t col_end) const {
    if (row_begin > row_end || row_end > rows_ || col_begin > col_end || col_end > cols_) {
        throw InvalidArgument("DenseMatrix::sub: range out of bounds");
    }
    DenseMatrix out(row_end - row_begin, col_end - col_begin);
    for (std::size_t i = row_begin; i < row_end; ++i) {
        std::copy(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_ + col_begin),
                  data_.begin() + static_cast<std::ptrdiff_t>(i * cols_ + col_end),
                  out.row(i - row_begin).begin());
    }
    return out;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs -= rhs; }
DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }
DenseMatrix operator*(DenseMatrix m, double s) { return m *= s; }

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) worst = std::max(worst, std::abs(da[k] - db[k]));
    return worst;
}

}  // namespace kaczmarz
