#pragma once

#include <string>
#include <vector>

#include "qkdn/fabric.hpp"

namespace qkdn {

// k node-disjoint paths from src to dst (endpoints excluded from the
// disjointness requirement), found by max-flow with unit node capacities.
// Edges are quantum links plus, unless quantum_only, secure classical
// channels. Ties break on lexicographic node order. Throws ProtocolError
// when fewer than k disjoint paths exist.
std::vector<std::vector<std::string>> find_disjoint_paths(const Fabric& f,
                                                          const std::string& src,
                                                          const std::string& dst,
                                                          unsigned k,
                                                          bool quantum_only = false);

} // namespace qkdn
