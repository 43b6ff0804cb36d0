#include <doctest.h>

#include <cmath>
#include <set>

#include "chainlab/random.hpp"

using namespace chainlab;

TEST_SUITE("random") {

TEST_CASE("philox4x32-10 known answers") {
    using rng::Counter;
    CHECK(rng::philox4x32_10({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(rng::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(rng::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("site index is a bijection onto the naturals") {
    CHECK(rng::site_index(0) == 0);
    CHECK(rng::site_index(-1) == 1);
    CHECK(rng::site_index(1) == 2);
    CHECK(rng::site_index(-2) == 3);
    std::set<std::uint64_t> seen;
    for (std::int64_t n = -500; n <= 500; ++n) seen.insert(rng::site_index(n));
    CHECK(seen.size() == 1001);
    CHECK(*seen.rbegin() == 1000);
}

TEST_CASE("draws are pure functions of (seed, stream, index)") {
    CHECK(rng::uniform01(5, 3, 9) == rng::uniform01(5, 3, 9));
    CHECK(rng::uniform01(5, 3, 9) != rng::uniform01(5, 3, 10));
    CHECK(rng::uniform01(5, 3, 9) != rng::uniform01(5, 4, 9));
    CHECK(rng::uniform01(5, 3, 9) != rng::uniform01(6, 3, 9));
}

TEST_CASE("distribution sanity") {
    const int n = 200000;
    double su = 0, sr = 0, sn = 0, sn2 = 0, sn4 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng::uniform01(11, 0, i);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double r = rng::rademacher(11, 1, i);
        REQUIRE(std::abs(r) == 1.0);
        sr += r;
        const double z = rng::standard_normal(11, 2, i);
        sn += z;
        sn2 += z * z;
        sn4 += z * z * z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(sr / n) < 5 / std::sqrt(n));
    CHECK(std::abs(sn / n) < 5 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(sn4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
}

}
