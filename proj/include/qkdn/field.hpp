#pragma once

#include <cstdint>

#include "qkdn/bitstring.hpp"
#include "qkdn/rng.hpp"

namespace qkdn {

bool is_prime(std::uint64_t n);

// Number of bits needed to hold any residue mod q.
std::size_t bits_for(std::uint64_t q);

// Arithmetic in Z_q for a prime modulus small enough that products fit
// in unsigned 128-bit intermediates.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t q);

    std::uint64_t modulus() const { return q_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q_ - b % q_) % q_; }
    std::uint64_t neg(std::uint64_t a) const { return (q_ - a % q_) % q_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    std::uint64_t inv(std::uint64_t a) const;

    std::uint64_t sample(Rng& rng) const { return rng.below(q_); }

    // Residue as a bit string of bits_for(q) bits, and back.
    BitString encode(std::uint64_t a) const;
    std::uint64_t decode(const BitString& bits) const;

private:
    std::uint64_t q_;
};

} // namespace qkdn
