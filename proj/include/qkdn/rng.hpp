#pragma once

#include <cstdint>
#include <string_view>

#include "qkdn/bitstring.hpp"

namespace qkdn {

// Counter-based deterministic generator. Every consumer derives its own
// labeled stream, so draw order in one stream never perturbs another and
// runs replay byte-identically for a given (seed, label) regardless of
// container iteration order. splitmix64 finalization; no std::random
// distributions, whose outputs differ across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : base_(seed) {}

    Rng stream(std::string_view label) const;

    std::uint64_t next_u64();
    // Uniform in [0, bound) via rejection sampling.
    std::uint64_t below(std::uint64_t bound);
    BitString bits(std::size_t len);

private:
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64_at(std::uint64_t state);

} // namespace qkdn
