#include "qkdn/bitstring.hpp"

#include <stdexcept>

namespace qkdn {

BitString BitString::from_bits(const std::string& s) {
    BitString out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("BitString::from_bits: bad character");
        out.bits_[i] = static_cast<std::uint8_t>(s[i] - '0');
    }
    return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t len) {
    if (len > 64)
        throw std::invalid_argument("BitString::from_uint: len > 64");
    if (len < 64 && (value >> len) != 0)
        throw std::invalid_argument("BitString::from_uint: value does not fit");
    BitString out(len);
    for (std::size_t i = 0; i < len; ++i)
        out.bits_[i] = static_cast<std::uint8_t>((value >> (len - 1 - i)) & 1);
    return out;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

BitString BitString::from_hex(const std::string& hex, std::size_t len) {
    if (hex.size() != (len + 3) / 4)
        throw std::invalid_argument("BitString::from_hex: digit count does not match len");
    BitString out(len);
    // Hex digits cover bits right-aligned: the last digit holds the last 4 bits.
    std::size_t nbits = hex.size() * 4;
    std::size_t pad = nbits - len;
    for (std::size_t d = 0; d < hex.size(); ++d) {
        int v = hex_digit(hex[d]);
        if (v < 0)
            throw std::invalid_argument("BitString::from_hex: bad character");
        for (int b = 0; b < 4; ++b) {
            std::size_t pos = d * 4 + static_cast<std::size_t>(b);
            int bit = (v >> (3 - b)) & 1;
            if (pos < pad) {
                if (bit != 0)
                    throw std::invalid_argument("BitString::from_hex: value does not fit len");
            } else {
                out.bits_[pos - pad] = static_cast<std::uint8_t>(bit);
            }
        }
    }
    return out;
}

BitString BitString::operator^(const BitString& other) const {
    BitString out = *this;
    out ^= other;
    return out;
}

BitString& BitString::operator^=(const BitString& other) {
    if (bits_.size() != other.bits_.size())
        throw std::invalid_argument("BitString::operator^: length mismatch");
    for (std::size_t i = 0; i < bits_.size(); ++i)
        bits_[i] ^= other.bits_[i];
    return *this;
}

BitString BitString::concat(const BitString& other) const {
    BitString out = *this;
    out.bits_.insert(out.bits_.end(), other.bits_.begin(), other.bits_.end());
    return out;
}

BitString BitString::slice(std::size_t from, std::size_t len) const {
    if (from + len > bits_.size())
        throw std::out_of_range("BitString::slice: out of range");
    BitString out(len);
    for (std::size_t i = 0; i < len; ++i)
        out.bits_[i] = bits_[from + i];
    return out;
}

std::string BitString::to_bits() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        s[i] = static_cast<char>('0' + bits_[i]);
    return s;
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::size_t ndigits = (bits_.size() + 3) / 4;
    std::string s(ndigits, '0');
    std::size_t pad = ndigits * 4 - bits_.size();
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        std::size_t pos = i + pad;
        if (bits_[i])
            s[pos / 4] = digits[hex_digit(s[pos / 4]) | (1 << (3 - pos % 4))];
    }
    return s;
}

std::uint64_t BitString::as_uint64() const {
    if (bits_.size() > 64)
        throw std::length_error("BitString::as_uint64: longer than 64 bits");
    std::uint64_t v = 0;
    for (std::uint8_t b : bits_)
        v = (v << 1) | b;
    return v;
}

} // namespace qkdn
