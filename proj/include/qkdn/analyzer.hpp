#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkdn/fabric.hpp"
#include "qkdn/symbolic.hpp"

namespace qkdn {

enum class TrustLevel { NAT, PAT, FAT };

const char* trust_level_name(TrustLevel level);

// What "knowing the secret" means over the run's primitive unknowns: either
// a bit functional per secret bit, or a single field element.
struct TargetSpec {
    std::vector<BitExpr> bits;
    std::optional<VarId> field_var;
    std::uint64_t q = 0; // field mode modulus

    bool field_mode() const { return field_var.has_value(); }
    std::size_t width() const { return field_mode() ? bits_for(q) : bits.size(); }
    // Number of distinct secret values a priori.
    std::uint64_t prior_size() const;
};

// Everything the classifier needs about a finished run besides transcripts:
// the secret's functional form and the share-material values whose
// possession defines partial access.
struct AnalysisContext {
    TargetSpec target;
    std::vector<SymValue> share_material;
};

enum class Engine { Auto, Linear, Enumeration };
enum class EnumMode { Presolve, Raw };

struct TrustVerdict {
    TrustLevel level = TrustLevel::NAT;
    std::size_t determined_bits = 0;
    std::optional<std::string> correlation_witness;
    std::optional<double> posterior_entropy_bits;
    std::string engine;
};

// GF(2) linear-deduction engine primitives, exposed for direct testing and
// for oracle cross-checks.
struct LinearView {
    std::size_t nvars = 0;
    // One row per observed bit: coefficient bit mask over all table
    // variables plus the observed right-hand side.
    struct Row {
        std::vector<std::uint64_t> coeffs;
        int rhs = 0;
    };
    std::vector<Row> rows;
};

// Builds rows from every transcript entry of the coalition members.
// Requires all entries to be pure GF(2) values.
LinearView build_linear_view(const Fabric& f, const std::vector<std::string>& members);

// Which targets lie in the row span; deduced[i] holds the forced value when
// determined[i] is true. Deduced values are audited against the true
// assignment and a violation throws.
struct SpanResult {
    std::vector<bool> determined;
    std::vector<int> deduced;
    std::size_t determined_count = 0;
};
SpanResult span_closure(const Fabric& f, const LinearView& view,
                        const std::vector<BitExpr>& targets);

// Exact posterior of the target given the coalition view, by exhausting
// every assignment of the relevant unknowns. Refuses oversized domains.
struct PosteriorResult {
    std::uint64_t states = 0;            // consistent assignments
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts; // value, count
    double entropy_bits = 0.0;
    bool uniform_over_prior = false;
    bool determined = false;
    std::size_t determined_bits = 0;     // bit positions pinned (bit mode)
    bool material_dependent = false;
};
PosteriorResult posterior_entropy(const Fabric& f, const std::vector<std::string>& members,
                                  const AnalysisContext& ctx,
                                  EnumMode mode = EnumMode::Presolve);

TrustVerdict classify(const Fabric& f, const std::vector<std::string>& members,
                      const AnalysisContext& ctx, Engine engine = Engine::Auto,
                      EnumMode mode = EnumMode::Presolve);

TrustVerdict classify_node(const Fabric& f, const std::string& node,
                           const AnalysisContext& ctx, Engine engine = Engine::Auto);

TrustVerdict classify_coalition(const Fabric& f, const std::vector<std::string>& members,
                                const AnalysisContext& ctx, Engine engine = Engine::Auto);

// Enumeration state cap: larger domains are refused rather than sampled.
constexpr std::uint64_t kEnumStateCap = std::uint64_t(1) << 21;

} // namespace qkdn
