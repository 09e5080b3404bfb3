#pragma once

#include <stdexcept>

namespace qkdn {

// Bad scenario/topology input; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A well-formed run that cannot complete (key exhaustion, missing mask,
// unreachable peer); maps to CLI exit code 1. Partial transcripts are kept.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qkdn
