#include "qkdn/rng.hpp"

#include <stdexcept>

namespace qkdn {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64_at(std::uint64_t state) {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng Rng::stream(std::string_view label) const {
    Rng out(splitmix64_at(base_ ^ fnv1a64(label)));
    return out;
}

std::uint64_t Rng::next_u64() {
    return splitmix64_at(base_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("Rng::below: bound must be positive");
    std::uint64_t x, r;
    do {
        x = next_u64();
        r = x % bound;
    } while (x - r > std::uint64_t(0) - bound);
    return r;
}

BitString Rng::bits(std::size_t len) {
    BitString out(len);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (i % 64 == 0)
            word = next_u64();
        out.set_bit(i, static_cast<int>((word >> (i % 64)) & 1));
    }
    return out;
}

} // namespace qkdn
