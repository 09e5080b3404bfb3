#pragma once

#include <string>

#include "qkdn/sim.hpp"

namespace qkdn {

// Serializes a finished run. JSON key order is fixed so identical runs are
// byte-identical; format is "json" or "text".
std::string emit_report(const RunReport& report, const std::string& format);

// Single-coalition result, same formats as emit_report.
std::string emit_verdict(const std::vector<std::string>& members, const TrustVerdict& v,
                         const std::string& format);

std::string verdict_line(const TrustVerdict& v);

} // namespace qkdn
