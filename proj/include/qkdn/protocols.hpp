#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdn/analyzer.hpp"
#include "qkdn/fabric.hpp"
#include "qkdn/secret_sharing.hpp"
#include "qkdn/symbolic.hpp"

namespace qkdn {

// Hop algebra of chain forwarding: strip the inbound pad, apply the
// outbound one.
BitString fat_relay_payload(const BitString& inbound, const BitString& key_in,
                            const BitString& key_out);

// Forwards `value` along `path`, one-time-pad encrypting over quantum links
// and sending in the clear over secure classical channels. Every decrypting
// hop logs the recovered intermediate under `label`. Returns the value as
// recovered by the final node.
TracedValue forward_along_path(Fabric& f, const std::vector<std::string>& path,
                               const std::string& label, const TracedValue& value,
                               std::optional<std::uint64_t> share_index = {});

struct FatOutcome {
    BitString delivered;
    std::vector<std::string> chain;
};

// Chain forwarding along the (unique) quantum relay path from alice to bob.
FatOutcome fat_send(Fabric& f, const std::string& alice, const std::string& bob,
                    const TracedValue& secret);

struct MultipathScheme {
    enum class Kind { Xor, Shamir };
    Kind kind = Kind::Xor;
    unsigned k = 2;
    unsigned t = 0;        // Shamir threshold
    std::uint64_t q = 0;   // Shamir modulus
    bool field_mode = false; // Shamir secret is a single field element
};

// Deterministic overrides for worked examples: the first k-1 XOR fragments,
// or one polynomial per Shamir chunk.
struct MultipathTestForce {
    std::vector<BitString> xor_head;
    std::vector<Polynomial> polys;
};

struct MultipathOutcome {
    BitString delivered;
    std::vector<SymValue> share_material;     // one per path
    std::size_t paths_delivered = 0;
};

MultipathOutcome pat_multipath_send(Fabric& f, const std::string& alice,
                                    const std::string& bob, const TracedValue& secret,
                                    const MultipathScheme& scheme,
                                    const std::vector<std::vector<std::string>>& paths,
                                    Rng& rng, const MultipathTestForce* force = nullptr);

} // namespace qkdn
