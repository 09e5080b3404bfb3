#include "qkdn/fabric.hpp"

#include <algorithm>
#include <cctype>

namespace qkdn {

NodeKind parse_node_kind(const std::string& s) {
    if (s == "end_host") return NodeKind::EndHost;
    if (s == "relay") return NodeKind::Relay;
    if (s == "satellite") return NodeKind::Satellite;
    if (s == "central_kms") return NodeKind::CentralKms;
    throw ConfigError("unknown node kind: " + s);
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::EndHost: return "end_host";
    case NodeKind::Relay: return "relay";
    case NodeKind::Satellite: return "satellite";
    case NodeKind::CentralKms: return "central_kms";
    }
    return "?";
}

std::pair<std::string, std::string> split_endpoint_pair(const std::string& channel) {
    std::size_t dash = channel.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == channel.size() ||
        channel.find('-', dash + 1) != std::string::npos)
        throw ConfigError("malformed endpoint pair: " + channel);
    return {channel.substr(0, dash), channel.substr(dash + 1)};
}

static bool valid_name(const std::string& name) {
    if (name.empty() || (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_'))
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

Fabric Fabric::build(const TopologySpec& spec) {
    Fabric f;
    for (const auto& [name, kind] : spec.nodes) {
        if (!valid_name(name))
            throw ConfigError("invalid node name: " + name);
        if (f.has_node(name))
            throw ConfigError("duplicate node name: " + name);
        f.nodes_.push_back({name, parse_node_kind(kind)});
        f.transcripts_[name].owner = name;
    }
    auto check_pair = [&](const std::string& a, const std::string& b) {
        if (!f.has_node(a))
            throw ConfigError("unknown node in link: " + a);
        if (!f.has_node(b))
            throw ConfigError("unknown node in link: " + b);
        if (a == b)
            throw ConfigError("self-loop at node: " + a);
    };
    for (const auto& [a, b] : spec.qlinks) {
        check_pair(a, b);
        if (f.find_qlink(a, b))
            throw ConfigError("duplicate quantum link: " + a + "-" + b);
        f.qlinks_.push_back({a, b, {}, 0, 0});
    }
    for (const auto& ch : spec.cchannels) {
        check_pair(ch.a, ch.b);
        if (f.find_cchannel(ch.a, ch.b))
            throw ConfigError("duplicate classical channel: " + ch.a + "-" + ch.b);
        f.cchannels_.push_back({ch.a, ch.b, ch.secure, {}, false});
    }
    // Every quantum link carries its ciphertexts over an implicit public
    // classical companion unless one was declared.
    for (const QuantumLink& l : f.qlinks_)
        if (!f.find_cchannel(l.a, l.b))
            f.cchannels_.push_back({l.a, l.b, false, {}, true});
    return f;
}

bool Fabric::has_node(const std::string& name) const {
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [&](const Node& n) { return n.name == name; });
}

const Node& Fabric::node(const std::string& name) const {
    for (const Node& n : nodes_)
        if (n.name == name) return n;
    throw ConfigError("unknown node: " + name);
}

QuantumLink* Fabric::find_qlink(const std::string& a, const std::string& b) {
    for (QuantumLink& l : qlinks_)
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return &l;
    return nullptr;
}

const QuantumLink* Fabric::find_qlink(const std::string& a, const std::string& b) const {
    return const_cast<Fabric*>(this)->find_qlink(a, b);
}

ClassicalChannel* Fabric::find_cchannel(const std::string& a, const std::string& b) {
    for (ClassicalChannel& c : cchannels_)
        if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return &c;
    return nullptr;
}

const ClassicalChannel* Fabric::find_cchannel(const std::string& a,
                                              const std::string& b) const {
    return const_cast<Fabric*>(this)->find_cchannel(a, b);
}

void Fabric::provision(const std::string& a, const std::string& b, std::size_t count,
                       std::size_t bit_length, Rng& rng) {
    QuantumLink* l = find_qlink(a, b);
    if (!l)
        throw ConfigError("no quantum link: " + a + "-" + b);
    for (std::size_t i = 0; i < count; ++i) {
        BitString value = rng.bits(bit_length);
        std::string id = "K[" + l->name() + "#" + std::to_string(l->provisioned) + "]";
        LinkKey key{id, value, symbols_.add_bits(id, value), false};
        l->pool.push_back(std::move(key));
        ++l->provisioned;
    }
}

void Fabric::inject_link_key(const std::string& a, const std::string& b,
                             const BitString& value) {
    QuantumLink* l = find_qlink(a, b);
    if (!l)
        throw ConfigError("no quantum link: " + a + "-" + b);
    std::string id = "K[" + l->name() + "#" + std::to_string(l->provisioned) + "]";
    LinkKey key{id, value, symbols_.add_bits(id, value), false};
    l->pool.push_back(std::move(key));
    ++l->provisioned;
}

DrawnKey Fabric::draw_key(const std::string& a, const std::string& b,
                          const std::string& caller) {
    QuantumLink* l = find_qlink(a, b);
    if (!l)
        throw ConfigError("no quantum link: " + a + "-" + b);
    if (caller != l->a && caller != l->b)
        throw ConfigError("draw_key caller " + caller + " is not an endpoint of " +
                          l->name());
    auto it = std::find_if(l->pool.begin(), l->pool.end(),
                           [](const LinkKey& k) { return !k.consumed; });
    if (it == l->pool.end())
        throw ProtocolError("key pool exhausted on link " + l->name());
    it->consumed = true;
    ++l->drawn;
    DrawnKey drawn{it->id, {it->value, SymValue::of_vars(it->vars)}};
    log(l->a, EntryRole::HeldKey, it->id, drawn.key);
    log(l->b, EntryRole::HeldKey, it->id, drawn.key);
    consumed_.push_back(drawn);
    return drawn;
}

std::size_t Fabric::pool_level(const std::string& a, const std::string& b) const {
    const QuantumLink* l = find_qlink(a, b);
    if (!l)
        throw ConfigError("no quantum link: " + a + "-" + b);
    return static_cast<std::size_t>(
        std::count_if(l->pool.begin(), l->pool.end(),
                      [](const LinkKey& k) { return !k.consumed; }));
}

void Fabric::add_tap(const std::string& channel, const std::string& node) {
    auto [a, b] = split_endpoint_pair(channel);
    if (!has_node(node))
        throw ConfigError("unknown tapping node: " + node);
    ClassicalChannel* c = find_cchannel(a, b);
    if (!c)
        throw ConfigError("no classical channel to tap: " + channel);
    c->taps.insert(node);
}

void Fabric::send(const std::string& from, const std::string& to, const std::string& label,
                  const TracedValue& value, std::optional<std::uint64_t> share_index) {
    ClassicalChannel* c = find_cchannel(from, to);
    if (!c)
        throw ConfigError("no channel between " + from + " and " + to);
    wire_.push_back({wire_.size(), c->name(), from, to, label, value.v, share_index});
    log(from, EntryRole::Sent, label, value);
    log(to, EntryRole::Received, label, value);
    for (const std::string& tapper : c->taps)
        if (tapper != from && tapper != to)
            log(tapper, EntryRole::Received, label, value);
}

void Fabric::log(const std::string& node, EntryRole role, const std::string& label,
                 const TracedValue& value) {
    // Symbolic bookkeeping must reproduce the concrete value exactly.
    if (value.s.eval(symbols_.true_assignment()) != value.v)
        throw std::logic_error("transcript entry '" + label +
                               "' disagrees with its symbolic form");
    auto it = transcripts_.find(node);
    if (it == transcripts_.end())
        throw ConfigError("unknown node: " + node);
    it->second.entries.push_back({role, label, value.v, value.s});
}

const Transcript& Fabric::transcript(const std::string& node) const {
    auto it = transcripts_.find(node);
    if (it == transcripts_.end())
        throw ConfigError("unknown node: " + node);
    return it->second;
}

} // namespace qkdn
