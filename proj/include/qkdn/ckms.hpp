#pragma once

#include <string>
#include <vector>

#include "qkdn/fabric.hpp"
#include "qkdn/symbolic.hpp"

namespace qkdn {

struct Mask {
    std::string origin;
    std::string label;
    TracedValue value;
};

Mask make_alice_mask(const std::string& alice, const TracedValue& secret,
                     const DrawnKey& first_link_key);

Mask make_relay_mask(const std::string& node, const DrawnKey& key_in,
                     const DrawnKey& key_out);

// XOR fold of the submitted masks; interior keys telescope away so the
// result equals secret XOR last-link-key. The expected count guards against
// a missing submission.
TracedValue central_combine(const std::vector<Mask>& masks, std::size_t expected);

BitString bob_recover(const BitString& combined, const BitString& last_link_key);

struct CkmsOutcome {
    BitString delivered;
    BitString combined;      // the value forwarded to the receiving host
    std::vector<std::string> chain;
};

// Mask submission along the chain's declared channels to the central node,
// fold there, and delivery of the folded value to bob. skip_mask_of forces
// the named node to withhold its submission (the fold then aborts).
CkmsOutcome centralized_send(Fabric& f, const std::string& alice, const std::string& bob,
                             const std::string& central, const TracedValue& secret,
                             const std::string& skip_mask_of = "");

} // namespace qkdn
