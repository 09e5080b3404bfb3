#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qkdn/analyzer.hpp"
#include "qkdn/fabric.hpp"
#include "qkdn/scenario.hpp"

namespace qkdn {

// Everything a finished run exposes for reporting: outcome flags, the
// network state with its transcripts and wire log, and the verdicts.
struct RunReport {
    Scenario scenario;
    std::uint64_t seed = 0;
    bool delivered = false;
    bool key_match = false;
    BitString secret;            // the sender's K_S
    BitString delivered_secret;  // the receiver's K_S
    std::vector<std::pair<std::string, TrustVerdict>> nodes;
    std::vector<std::pair<std::vector<std::string>, TrustVerdict>> coalitions;
    std::shared_ptr<const Fabric> fabric; // wire log, consumed keys, transcripts
};

// Provisions pools, executes the scenario's protocol, classifies every node
// plus the declared coalitions. Identical (scenario, seed) replays
// byte-identically.
RunReport run_scenario(const Scenario& sc, std::uint64_t seed);

// Classifies one ad-hoc coalition on a fresh run of the scenario.
TrustVerdict analyze_coalition(const Scenario& sc, std::uint64_t seed,
                               const std::vector<std::string>& members);

} // namespace qkdn
