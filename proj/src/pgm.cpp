#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <string>

#include "kaczmarz/error.hpp"
#include "kaczmarz/io.hpp"

namespace kaczmarz::io {

namespace {

class PgmParser {
public:
    explicit PgmParser(std::string bytes) : data_(std::move(bytes)) {}

    GrayImage parse() {
        if (data_.size() < 2 || data_[0] != 'P' || (data_[1] != '2' && data_[1] != '5')) {
            throw ParseError("pgm: expected P2 or P5 magic", 0);
        }
        const bool binary = data_[1] == '5';
        pos_ = 2;
        const std::size_t width = next_int("width");
        const std::size_t height = next_int("height");
        const std::size_t maxval = next_int("max value");
        if (width == 0 || height == 0) throw ParseError("pgm: zero image dimension", pos_);
        if (maxval == 0 || maxval > 65535) throw ParseError("pgm: max value out of range", pos_);

        std::vector<double> px(width * height);
        if (binary) {
            if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
                throw ParseError("pgm: missing separator before raster", pos_);
            }
            ++pos_;
            const std::size_t bytes_per = maxval > 255 ? 2 : 1;
            if (data_.size() - pos_ < px.size() * bytes_per) {
                throw ParseError("pgm: raster truncated", data_.size());
            }
            for (double& v : px) {
                std::size_t s = static_cast<unsigned char>(data_[pos_++]);
                if (bytes_per == 2) s = (s << 8) | static_cast<unsigned char>(data_[pos_++]);
                if (s > maxval) throw ParseError("pgm: sample above max value", pos_ - bytes_per);
                v = static_cast<double>(s);
            }
        } else {
            for (double& v : px) {
                const std::size_t at = pos_;
                const std::size_t s = next_int("pixel");
                if (s > maxval) throw ParseError("pgm: sample above max value", at);
                v = static_cast<double>(s);
            }
        }
        return GrayImage(height, width, std::move(px), static_cast<double>(maxval));
    }

private:
    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t next_int(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(data_[pos_] - '0');
            if (value > 1'000'000'000) throw ParseError(std::string("pgm: ") + what + " too large", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("pgm: expected ") + what, start);
        return value;
    }

    std::string data_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::istream& in) {
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return PgmParser(std::move(bytes)).parse();
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image, bool binary) {
    const auto maxval = static_cast<std::size_t>(std::lround(image.max_value()));
    if (maxval == 0 || maxval > 65535) throw InvalidArgument("pgm: max value must be in [1, 65535]");
    out << (binary ? "P5" : "P2") << '\n'
        << image.width() << ' ' << image.height() << '\n'
        << maxval << '\n';
    auto sample = [&](double v) {
        const long s = std::lround(v);
        return static_cast<std::size_t>(std::clamp<long>(s, 0, static_cast<long>(maxval)));
    };
    const auto px = image.pixels();
    if (binary) {
        for (double v : px) {
            const std::size_t s = sample(v);
            if (maxval > 255) out.put(static_cast<char>((s >> 8) & 0xFF));
            out.put(static_cast<char>(s & 0xFF));
        }
    } else {
        for (std::size_t i = 0; i < image.height(); ++i) {
            for (std::size_t j = 0; j < image.width(); ++j) {
                out << sample(px[i * image.width() + j]) << (j + 1 == image.width() ? '\n' : ' ');
            }
        }
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_pgm(out, image, binary);
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace kaczmarz::io
