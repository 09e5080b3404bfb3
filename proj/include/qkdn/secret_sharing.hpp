#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qkdn/bitstring.hpp"
#include "qkdn/field.hpp"
#include "qkdn/rng.hpp"

namespace qkdn {

enum class ShareScheme { Shamir, Xor, Concat };

struct Share {
    ShareScheme scheme = ShareScheme::Shamir;
    std::uint64_t index = 0;   // Shamir x-coordinate or 1-based fragment position
    std::uint64_t value = 0;   // Shamir payload in Z_q
    std::uint64_t modulus = 0; // Shamir only
    BitString bits;            // Xor/Concat payload
};

// coeffs[i] multiplies x^i; coeffs[0] is the secret.
struct Polynomial {
    std::uint64_t q = 0;
    std::vector<std::uint64_t> coeffs;

    std::uint64_t eval(std::uint64_t x) const;
};

// Uniform degree-(t-1) polynomial with constant term `secret`; the leading
// coefficient is redrawn until nonzero when t >= 2.
Polynomial shamir_polynomial(std::uint64_t secret, unsigned t, std::uint64_t q, Rng& rng);

// Shares (i, f(i)) for i = 1..k.
std::vector<Share> shamir_shares(const Polynomial& f, unsigned k);

std::vector<Share> shamir_split(std::uint64_t secret, unsigned t, unsigned k,
                                std::uint64_t q, Rng& rng);

// Lagrange interpolation at x = 0 through the first t shares.
std::uint64_t shamir_reconstruct(const std::vector<Share>& shares, unsigned t);

std::vector<BitString> xor_split(const BitString& secret, unsigned k, Rng& rng);

// Deterministic variant: `head` supplies the first k-1 fragments.
std::vector<BitString> xor_split_from(const BitString& secret, std::vector<BitString> head);

BitString xor_combine(const std::vector<BitString>& fragments);

std::pair<BitString, BitString> concat_split(const BitString& value);
BitString concat_join(const BitString& left, const BitString& right);

} // namespace qkdn
