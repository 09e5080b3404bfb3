#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdn/fabric.hpp"

namespace qkdn {

// A parsed scenario file: topology, protocol selection and parameters,
// optional seed, taps and the coalitions to analyze.
struct Scenario {
    TopologySpec topology;
    std::string protocol; // fat_chain, pat_xor, pat_shamir, decentralized, centralized
    std::size_t secret_bits = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> q;
    std::optional<unsigned> t;
    std::optional<unsigned> k;
    // Keys provisioned per quantum link; defaults to what the protocol needs.
    std::optional<std::size_t> pool_keys;
    std::vector<std::pair<std::string, std::vector<std::string>>> taps;
    std::vector<std::vector<std::string>> coalitions;

    // Role lookups over the topology (validated during parsing).
    std::string alice() const;
    std::string bob() const;
    std::string satellite() const;
    std::string central() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

} // namespace qkdn
