#pragma once

#include <string>
#include <vector>

#include "qkdn/fabric.hpp"
#include "qkdn/symbolic.hpp"

namespace qkdn {

// Dual-path key establishment: XOR masks of the halves travel the relay
// chain, the first halves travel the satellite channel, and the secret is
// composed from the halves that never leave their owners.
struct HalfSplit {
    TracedValue original;
    TracedValue first_half;
    TracedValue second_half;
    TracedValue xor_mask;
};

HalfSplit dkms_prepare(const TracedValue& party_random);

BitString dkms_recover(const BitString& mask, const BitString& transmitted_half);

BitString dkms_compose_secret(const BitString& local_hidden_half,
                              const BitString& peer_hidden_half);

struct DkmsOutcome {
    BitString alice_secret;
    BitString bob_secret;
    // The never-transmitted halves, for transcript scanning.
    BitString alice_hidden_half;
    BitString bob_hidden_half;
    std::vector<SymValue> share_material; // both halves of both parties
    std::vector<BitExpr> secret_bits;     // functional form of the composed secret
};

// Runs the exchange: masks along the terrestrial chain, first halves via the
// satellite. When bob_first is set the two directions run in the opposite
// order; outcomes are identical either way.
DkmsOutcome dkms_exchange(Fabric& f, const std::string& alice, const std::string& bob,
                          const std::string& satellite, const TracedValue& k_a,
                          const TracedValue& k_b, bool bob_first = false);

} // namespace qkdn
