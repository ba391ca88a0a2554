#pragma once

#include <cstdint>
#include <optional>

namespace kaczmarz {

//
// Counter-based generator: draw k (0-based) is SplitMix64's finalizer applied
// to seed + (k + 1) * 0x9E3779B97F4A7C15. The output depends only on the seed
// and the number of draws taken, so streams are identical on every platform.
//
class SeededRng {
public:
    static constexpr const char* kAlgorithm = "splitmix64-counter";

    explicit SeededRng(std::uint64_t seed = 0) noexcept : seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t position() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    // Uniform in [0, 1) with 53 random bits. One draw.
    double uniform() noexcept;
    // Uniform in (0, 1). One draw.
    double uniform_open() noexcept;
    // Standard normal via Box-Muller; consumes two draws per generated pair.
    double normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_normal_;
};

}  // namespace kaczmarz
