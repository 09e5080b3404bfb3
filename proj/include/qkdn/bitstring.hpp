#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qkdn {

// Fixed-length bit string. Index 0 is the most significant bit, so
// "10110100" parses with bit(0) == 1 and prints back the same way.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t len) : bits_(len, 0) {}

    static BitString from_bits(const std::string& s);
    static BitString from_uint(std::uint64_t value, std::size_t len);
    static BitString from_hex(const std::string& hex, std::size_t len);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    int bit(std::size_t i) const { return bits_[i]; }
    void set_bit(std::size_t i, int v) { bits_[i] = static_cast<std::uint8_t>(v & 1); }

    BitString operator^(const BitString& other) const;
    BitString& operator^=(const BitString& other);
    bool operator==(const BitString& other) const = default;

    BitString concat(const BitString& other) const;
    BitString slice(std::size_t from, std::size_t len) const;

    std::string to_bits() const;
    // Lowercase hex, left-padded to ceil(len/4) digits.
    std::string to_hex() const;
    std::uint64_t as_uint64() const;

private:
    std::vector<std::uint8_t> bits_;
};

} // namespace qkdn
