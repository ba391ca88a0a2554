#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kaczmarz {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A matrix (or block, row, column) that must be nonzero was zero.
class ZeroMatrixError : public Error {
public:
    using Error::Error;
};

// Product would exceed the Kronecker materialization cap.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t location)
        : Error(what), location_(location) {}

    // Line number (Matrix Market) or byte offset (PGM) of the failure.
    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace kaczmarz
