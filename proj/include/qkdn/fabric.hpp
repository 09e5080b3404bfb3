#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qkdn/bitstring.hpp"
#include "qkdn/errors.hpp"
#include "qkdn/rng.hpp"
#include "qkdn/symbolic.hpp"
#include "qkdn/transcript.hpp"

namespace qkdn {

enum class NodeKind { EndHost, Relay, Satellite, CentralKms };

NodeKind parse_node_kind(const std::string& s);
const char* node_kind_name(NodeKind kind);

struct Node {
    std::string name;
    NodeKind kind;
};

struct LinkKey {
    std::string id;
    BitString value;
    std::vector<VarId> vars;
    bool consumed = false;
};

// Pre-shared one-time-pad pool between quantum-adjacent nodes. Both
// endpoints see the same pool and the same FIFO consumption order.
struct QuantumLink {
    std::string a, b;
    std::vector<LinkKey> pool;
    std::size_t provisioned = 0;
    std::size_t drawn = 0;

    std::string name() const { return a + "-" + b; }
};

struct ClassicalChannel {
    std::string a, b;
    bool secure = true;
    std::set<std::string> taps; // nodes that overhear every message
    bool implicit = false;      // auto-created companion of a quantum link

    std::string name() const { return a + "-" + b; }
};

struct TopologySpec {
    std::vector<std::pair<std::string, std::string>> nodes; // name, kind
    std::vector<std::pair<std::string, std::string>> qlinks;
    struct Chan {
        std::string a, b;
        bool secure = true;
    };
    std::vector<Chan> cchannels;
};

struct WireRecord {
    std::size_t seq = 0;
    std::string channel;
    std::string from, to;
    std::string label;
    BitString value;
    std::optional<std::uint64_t> share_index;
};

struct DrawnKey {
    std::string id;
    TracedValue key;
};

// Runtime network state: validated topology, key pools, per-node transcripts,
// the global wire log, and the symbolic variable table for the run.
class Fabric {
public:
    static Fabric build(const TopologySpec& spec);

    const std::vector<Node>& nodes() const { return nodes_; }
    bool has_node(const std::string& name) const;
    const Node& node(const std::string& name) const;

    const std::vector<QuantumLink>& qlinks() const { return qlinks_; }
    const std::vector<ClassicalChannel>& cchannels() const { return cchannels_; }
    QuantumLink* find_qlink(const std::string& a, const std::string& b);
    const QuantumLink* find_qlink(const std::string& a, const std::string& b) const;
    ClassicalChannel* find_cchannel(const std::string& a, const std::string& b);
    const ClassicalChannel* find_cchannel(const std::string& a, const std::string& b) const;

    void provision(const std::string& a, const std::string& b, std::size_t count,
                   std::size_t bit_length, Rng& rng);
    // Deterministic pool setup for worked examples and tests.
    void inject_link_key(const std::string& a, const std::string& b, const BitString& value);
    DrawnKey draw_key(const std::string& a, const std::string& b, const std::string& caller);
    std::size_t pool_level(const std::string& a, const std::string& b) const;

    // channel is "x-y" in either orientation; must name a classical channel
    // (every quantum link has an implicit classical companion).
    void add_tap(const std::string& channel, const std::string& node);

    void send(const std::string& from, const std::string& to, const std::string& label,
              const TracedValue& value, std::optional<std::uint64_t> share_index = {});

    void log(const std::string& node, EntryRole role, const std::string& label,
             const TracedValue& value);

    const Transcript& transcript(const std::string& node) const;
    const std::map<std::string, Transcript>& transcripts() const { return transcripts_; }
    const std::vector<WireRecord>& wire() const { return wire_; }
    const std::vector<DrawnKey>& consumed_keys() const { return consumed_; }

    SymTable& symbols() { return symbols_; }
    const SymTable& symbols() const { return symbols_; }

private:
    std::vector<Node> nodes_;
    std::vector<QuantumLink> qlinks_;
    std::vector<ClassicalChannel> cchannels_;
    std::map<std::string, Transcript> transcripts_;
    std::vector<WireRecord> wire_;
    std::vector<DrawnKey> consumed_;
    SymTable symbols_;
    std::vector<std::uint64_t> truth_; // grows with symbols_; audits log calls
};

// Canonical unordered pair key "a-b" with the endpoint order of declaration
// preserved by lookup helpers; parsing splits on the last '-' free form.
std::pair<std::string, std::string> split_endpoint_pair(const std::string& channel);

} // namespace qkdn
