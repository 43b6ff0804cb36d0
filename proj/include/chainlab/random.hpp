#pragma once

// Counter-based random numbers (Philox4x32-10). Every draw is a pure
// function of (seed, stream, index), so ensembles are reproducible no
// matter how samples are scheduled.

#include <array>
#include <cstdint>

namespace chainlab::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Ten-round Philox 4x32 block function.
Counter philox4x32_10(Counter ctr, Key key);

/// Block for (seed, stream, index): key = seed, counter = (index, stream).
Counter block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform on [0, 1) with 53 random bits.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// +1 or -1 with equal probability.
double rademacher(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Standard normal via Box-Muller on the two 64-bit halves of one block.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Bijection Z -> N used to key lattice sites: 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
constexpr std::uint64_t site_index(std::int64_t n) {
    return n >= 0 ? 2 * static_cast<std::uint64_t>(n)
                  : 2 * static_cast<std::uint64_t>(-(n + 1)) + 1;
}

}  // namespace chainlab::rng
