#include "chainlab/random.hpp"

#include <cmath>
#include <numbers>

namespace chainlab::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

Counter philox4x32_10(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

Counter block(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    const Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return philox4x32_10(ctr, key);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const Counter c = block(seed, stream, index);
    return to_unit(c[0], c[1]);
}

double rademacher(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return (block(seed, stream, index)[0] & 1u) ? 1.0 : -1.0;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const Counter c = block(seed, stream, index);
    const double u1 = 1.0 - to_unit(c[0], c[1]);  // (0, 1]
    const double u2 = to_unit(c[2], c[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace chainlab::rng
