#include "qkdn/field.hpp"

#include <bit>
#include <stdexcept>

namespace qkdn {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::size_t bits_for(std::uint64_t q) {
    if (q < 2)
        throw std::invalid_argument("bits_for: modulus must be at least 2");
    return static_cast<std::size_t>(std::bit_width(q - 1));
}

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
    if (!is_prime(q))
        throw std::invalid_argument("PrimeField: modulus is not prime");
    if (q >= (std::uint64_t(1) << 32))
        throw std::invalid_argument("PrimeField: modulus too large");
}

std::uint64_t PrimeField::mul(std::uint64_t a, std::uint64_t b) const {
    return (a % q_) * (b % q_) % q_;
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1, base = a % q_;
    while (e > 0) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a % q_ == 0)
        throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(a, q_ - 2);
}

BitString PrimeField::encode(std::uint64_t a) const {
    return BitString::from_uint(a % q_, bits_for(q_));
}

std::uint64_t PrimeField::decode(const BitString& bits) const {
    if (bits.size() != bits_for(q_))
        throw std::invalid_argument("PrimeField::decode: width mismatch");
    std::uint64_t v = bits.as_uint64();
    if (v >= q_)
        throw std::out_of_range("PrimeField::decode: value out of range");
    return v;
}

} // namespace qkdn
