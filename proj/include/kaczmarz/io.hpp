#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/problems.hpp"
#include "kaczmarz/sparse_matrix.hpp"

namespace kaczmarz::io {

// Matrix Market "coordinate real|integer general|symmetric". Symmetric input is
// expanded, duplicates are summed, indices become 0-based. Array-format files are
// accepted too and returned in sparse form. Throws ParseError (with line number)
// or UnsupportedFormat for complex/pattern fields.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix load_matrix_market(const std::filesystem::path& path);

// Dense view of any supported Matrix Market file.
DenseMatrix load_matrix_market_dense(const std::filesystem::path& path);

// Coordinate real general, values with 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& m);
// Array real general (column-major), 17 significant digits.
void write_matrix_market_array(std::ostream& out, const DenseMatrix& m);
void save_matrix_market_array(const std::filesystem::path& path, const DenseMatrix& m);

// P2 (ASCII) or P5 (binary, 1 or 2 bytes per sample). Throws ParseError with byte offset.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
// Pixels are rounded and clamped to [0, max_value]. binary selects P5.
void write_pgm(std::ostream& out, const GrayImage& image, bool binary = true);
void write_pgm(const std::filesystem::path& path, const GrayImage& image, bool binary = true);

}  // namespace kaczmarz::io
