#include "qkdn/secret_sharing.hpp"

#include <set>
#include <stdexcept>

namespace qkdn {

std::uint64_t Polynomial::eval(std::uint64_t x) const {
    PrimeField F(q);
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = F.add(F.mul(acc, x), coeffs[i]);
    return acc;
}

Polynomial shamir_polynomial(std::uint64_t secret, unsigned t, std::uint64_t q, Rng& rng) {
    PrimeField F(q);
    if (t < 1)
        throw std::invalid_argument("shamir_polynomial: threshold must be at least 1");
    if (secret >= q)
        throw std::invalid_argument("shamir_polynomial: secret out of field");
    Polynomial f;
    f.q = q;
    f.coeffs.resize(t);
    f.coeffs[0] = secret;
    for (unsigned i = 1; i < t; ++i)
        f.coeffs[i] = F.sample(rng);
    if (t >= 2)
        while (f.coeffs[t - 1] == 0)
            f.coeffs[t - 1] = F.sample(rng);
    return f;
}

std::vector<Share> shamir_shares(const Polynomial& f, unsigned k) {
    std::vector<Share> shares;
    shares.reserve(k);
    for (unsigned i = 1; i <= k; ++i) {
        Share s;
        s.scheme = ShareScheme::Shamir;
        s.index = i;
        s.value = f.eval(i);
        s.modulus = f.q;
        shares.push_back(std::move(s));
    }
    return shares;
}

std::vector<Share> shamir_split(std::uint64_t secret, unsigned t, unsigned k,
                                std::uint64_t q, Rng& rng) {
    if (t < 1)
        throw std::invalid_argument("shamir_split: threshold must be at least 1");
    if (k < t)
        throw std::invalid_argument("shamir_split: share count below threshold");
    if (k >= q)
        throw std::invalid_argument("shamir_split: share indices would exceed the field");
    return shamir_shares(shamir_polynomial(secret, t, q, rng), k);
}

std::uint64_t shamir_reconstruct(const std::vector<Share>& shares, unsigned t) {
    if (t < 1)
        throw std::invalid_argument("shamir_reconstruct: threshold must be at least 1");
    if (shares.size() < t)
        throw std::invalid_argument("shamir_reconstruct: fewer shares than threshold");
    std::uint64_t q = shares[0].modulus;
    std::set<std::uint64_t> seen;
    for (const Share& s : shares) {
        if (s.scheme != ShareScheme::Shamir)
            throw std::invalid_argument("shamir_reconstruct: non-shamir share");
        if (s.modulus != q)
            throw std::invalid_argument("shamir_reconstruct: mixed moduli");
        if (s.index == 0 || s.index >= q)
            throw std::invalid_argument("shamir_reconstruct: index out of range");
        if (!seen.insert(s.index).second)
            throw std::invalid_argument("shamir_reconstruct: duplicate index");
    }
    PrimeField F(q);
    std::uint64_t secret = 0;
    for (unsigned i = 0; i < t; ++i) {
        std::uint64_t num = 1, den = 1;
        for (unsigned j = 0; j < t; ++j) {
            if (j == i) continue;
            num = F.mul(num, shares[j].index);
            den = F.mul(den, F.sub(shares[j].index, shares[i].index));
        }
        std::uint64_t lagrange = F.mul(num, F.inv(den));
        secret = F.add(secret, F.mul(shares[i].value, lagrange));
    }
    return secret;
}

std::vector<BitString> xor_split(const BitString& secret, unsigned k, Rng& rng) {
    if (k < 2)
        throw std::invalid_argument("xor_split: need at least 2 fragments");
    if (secret.empty())
        throw std::invalid_argument("xor_split: empty secret");
    std::vector<BitString> head;
    head.reserve(k - 1);
    for (unsigned i = 0; i + 1 < k; ++i)
        head.push_back(rng.bits(secret.size()));
    return xor_split_from(secret, std::move(head));
}

std::vector<BitString> xor_split_from(const BitString& secret, std::vector<BitString> head) {
    if (secret.empty())
        throw std::invalid_argument("xor_split_from: empty secret");
    BitString last = secret;
    for (const BitString& frag : head)
        last ^= frag;
    head.push_back(std::move(last));
    return head;
}

BitString xor_combine(const std::vector<BitString>& fragments) {
    if (fragments.empty())
        throw std::invalid_argument("xor_combine: no fragments");
    BitString out = fragments[0];
    for (std::size_t i = 1; i < fragments.size(); ++i)
        out ^= fragments[i];
    return out;
}

std::pair<BitString, BitString> concat_split(const BitString& value) {
    if (value.empty() || value.size() % 2 != 0)
        throw std::invalid_argument("concat_split: length must be even and positive");
    std::size_t half = value.size() / 2;
    return {value.slice(0, half), value.slice(half, half)};
}

BitString concat_join(const BitString& left, const BitString& right) {
    if (left.empty() || right.empty())
        throw std::invalid_argument("concat_join: empty operand");
    return left.concat(right);
}

} // namespace qkdn
