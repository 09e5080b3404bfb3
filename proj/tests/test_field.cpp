#include "doctest.h"

#include <stdexcept>

#include "qkdn/field.hpp"

using qkdn::BitString;
using qkdn::PrimeField;

TEST_CASE("primality by trial division") {
    CHECK(qkdn::is_prime(2));
    CHECK(qkdn::is_prime(7));
    CHECK(qkdn::is_prime(13));
    CHECK(qkdn::is_prime(65521));
    CHECK_FALSE(qkdn::is_prime(0));
    CHECK_FALSE(qkdn::is_prime(1));
    CHECK_FALSE(qkdn::is_prime(9));
    CHECK_FALSE(qkdn::is_prime(65535));
}

TEST_CASE("residue bit widths") {
    CHECK(qkdn::bits_for(2) == 1);
    CHECK(qkdn::bits_for(5) == 3);
    CHECK(qkdn::bits_for(7) == 3);
    CHECK(qkdn::bits_for(11) == 4);
    CHECK(qkdn::bits_for(13) == 4);
}

TEST_CASE("construction rejects composite moduli") {
    CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_NOTHROW(PrimeField(13));
}

TEST_CASE("arithmetic mod 7") {
    PrimeField F(7);
    CHECK(F.add(5, 4) == 2);
    CHECK(F.sub(2, 5) == 4);
    CHECK(F.neg(3) == 4);
    CHECK(F.mul(5, 5) == 4);
    CHECK(F.pow(3, 6) == 1);
    CHECK(F.inv(2) == 4);
    CHECK(F.inv(5) == 3);
    CHECK_THROWS_AS(F.inv(0), std::domain_error);
    for (std::uint64_t a = 1; a < 7; ++a)
        CHECK(F.mul(a, F.inv(a)) == 1);
}

TEST_CASE("encode and decode residues") {
    PrimeField F(13);
    CHECK(F.encode(0).to_bits() == "0000");
    CHECK(F.encode(12).to_bits() == "1100");
    for (std::uint64_t a = 0; a < 13; ++a)
        CHECK(F.decode(F.encode(a)) == a);
    CHECK_THROWS_AS(F.decode(BitString::from_bits("1111")), std::out_of_range);
    CHECK_THROWS_AS(F.decode(BitString::from_bits("111")), std::invalid_argument);
}

TEST_CASE("sampling stays inside the field") {
    PrimeField F(11);
    qkdn::Rng rng(5);
    bool seen[11] = {};
    for (int i = 0; i < 500; ++i)
        seen[F.sample(rng)] = true;
    for (bool s : seen)
        CHECK(s);
}
