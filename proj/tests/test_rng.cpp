#include "doctest.h"

#include <map>
#include <stdexcept>

#include "qkdn/rng.hpp"

using qkdn::BitString;
using qkdn::Rng;

// Expected values come from an independent reference implementation of
// splitmix64 / FNV-1a kept outside this repository.

TEST_CASE("fnv1a64 reference values") {
    CHECK(qkdn::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(qkdn::fnv1a64("link") == 0xbf4b9bad694f4809ULL);
}

TEST_CASE("splitmix64 reference value") {
    CHECK(qkdn::splitmix64_at(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("sequence for a fixed seed") {
    Rng r(42);
    CHECK(r.next_u64() == 0x28efe333b266f103ULL);
    CHECK(r.next_u64() == 0x47526757130f9f52ULL);
    CHECK(r.next_u64() == 0x581ce1ff0e4ae394ULL);
}

TEST_CASE("labeled stream is deterministic and detached from parent") {
    Rng parent(42);
    Rng s1 = parent.stream("alice-n1");
    CHECK(s1.next_u64() == 0xc127f21c83be5242ULL);
    CHECK(s1.next_u64() == 0x2b091ad8eb04a291ULL);

    // Drawing from the parent does not shift the stream.
    parent.next_u64();
    Rng s2 = parent.stream("alice-n1");
    CHECK(s2.next_u64() == 0xc127f21c83be5242ULL);

    CHECK(parent.stream("a").next_u64() != parent.stream("b").next_u64());
}

TEST_CASE("below matches reference and stays in range") {
    Rng r(7);
    std::uint64_t expect[6] = {9, 9, 8, 10, 6, 4};
    for (std::uint64_t e : expect)
        CHECK(r.below(13) == e);
    Rng r2(99);
    for (int i = 0; i < 1000; ++i)
        CHECK(r2.below(5) < 5);
    CHECK(r2.below(1) == 0);
    CHECK_THROWS_AS(r2.below(0), std::invalid_argument);
}

TEST_CASE("bit draws match reference") {
    Rng r(123);
    CHECK(r.bits(16).to_bits() == "0011111011101101");
    Rng r2(123);
    CHECK(r2.bits(8).to_bits() == "00111110");
    CHECK(r2.bits(8).to_bits() == "00010111");
}

TEST_CASE("below is unbiased enough to pass a coarse frequency check") {
    Rng r(2024);
    std::map<std::uint64_t, int> counts;
    const int n = 13000;
    for (int i = 0; i < n; ++i)
        ++counts[r.below(13)];
    for (auto& [v, c] : counts) {
        CHECK(v < 13);
        CHECK(c > 800);
        CHECK(c < 1200);
    }
}
