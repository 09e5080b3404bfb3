#pragma once

#include <string>
#include <vector>

#include "qkdn/bitstring.hpp"
#include "qkdn/symbolic.hpp"

namespace qkdn {

// What a node legitimately sees during a run: keys it holds, messages it
// sends and receives, and intermediates it computes. Honest-but-curious
// analysis works from these entries alone.
enum class EntryRole { HeldKey, Received, Sent, Computed };

const char* role_name(EntryRole role);

struct TranscriptEntry {
    EntryRole role;
    std::string label;
    BitString value;
    SymValue sym;
};

struct Transcript {
    std::string owner;
    std::vector<TranscriptEntry> entries;
};

} // namespace qkdn
