#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>
#include <vector>

#include "kaczmarz/error.hpp"
#include "kaczmarz/io.hpp"

namespace kaczmarz::io {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next non-comment, non-blank line.
    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '%') continue;
            return true;
        }
        return false;
    }
};

std::istringstream classic_stream(const std::string& s) {
    std::istringstream ss(s);
    ss.imbue(std::locale::classic());
    return ss;
}

struct Header {
    bool coordinate;
    bool symmetric;
};

Header parse_header(std::istream& in, std::size_t& line_no) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("matrix market: empty input", 1);
    line_no = 1;
    auto ss = classic_stream(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("matrix market: missing %%MatrixMarket matrix banner", 1);
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array") {
        throw ParseError("matrix market: unknown format '" + format + "'", 1);
    }
    if (field == "complex" || field == "pattern") {
        throw UnsupportedFormat("matrix market: unsupported field '" + field + "'");
    }
    if (field != "real" && field != "integer" && field != "double") {
        throw ParseError("matrix market: unknown field '" + field + "'", 1);
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw UnsupportedFormat("matrix market: unsupported symmetry '" + symmetry + "'");
    }
    return {format == "coordinate", symmetry == "symmetric"};
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::size_t line_no = 0;
    const Header h = parse_header(in, line_no);
    LineReader reader{in, line_no};
    std::string line;
    if (!reader.next(line)) throw ParseError("matrix market: missing size line", reader.line_no + 1);

    std::size_t rows = 0, cols = 0, entries = 0;
    {
        auto ss = classic_stream(line);
        if (!(ss >> rows >> cols)) throw ParseError("matrix market: bad size line", reader.line_no);
        if (h.coordinate && !(ss >> entries)) {
            throw ParseError("matrix market: size line lacks entry count", reader.line_no);
        }
    }
    if (h.symmetric && rows != cols) {
        throw ParseError("matrix market: symmetric matrix must be square", reader.line_no);
    }

    std::vector<Triplet> triplets;
    if (h.coordinate) {
        triplets.reserve(h.symmetric ? 2 * entries : entries);
        for (std::size_t k = 0; k < entries; ++k) {
            if (!reader.next(line)) {
                throw ParseError("matrix market: expected " + std::to_string(entries) +
                                 " entries, found " + std::to_string(k),
                                 reader.line_no + 1);
            }
            auto ss = classic_stream(line);
            std::size_t i = 0, j = 0;
            double v = 0.0;
            if (!(ss >> i >> j >> v)) throw ParseError("matrix market: bad entry", reader.line_no);
            if (i == 0 || j == 0 || i > rows || j > cols) {
                throw ParseError("matrix market: index out of range", reader.line_no);
            }
            triplets.push_back({i - 1, j - 1, v});
            if (h.symmetric && i != j) triplets.push_back({j - 1, i - 1, v});
        }
    } else {
        // Column-major values; symmetric arrays list the lower triangle only.
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t i = h.symmetric ? j : 0; i < rows; ++i) {
                if (!reader.next(line)) {
                    throw ParseError("matrix market: array data ended early", reader.line_no + 1);
                }
                auto ss = classic_stream(line);
                double v = 0.0;
                if (!(ss >> v)) throw ParseError("matrix market: bad value", reader.line_no);
                if (v == 0.0) continue;
                triplets.push_back({i, j, v});
                if (h.symmetric && i != j) triplets.push_back({j, i, v});
            }
        }
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_matrix_market(in);
}

DenseMatrix load_matrix_market_dense(const std::filesystem::path& path) {
    return load_matrix_market(path).to_dense();
}

namespace {

void configure(std::ostream& out) {
    out.imbue(std::locale::classic());
    out << std::setprecision(17);
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
    configure(out);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto idx = m.row_indices(i);
        auto val = m.row_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            out << (i + 1) << ' ' << (idx[k] + 1) << ' ' << val[k] << '\n';
        }
    }
}

void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_matrix_market(out, m);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_matrix_market_array(std::ostream& out, const DenseMatrix& m) {
    configure(out);
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
}

void save_matrix_market_array(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_matrix_market_array(out, m);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace kaczmarz::io
