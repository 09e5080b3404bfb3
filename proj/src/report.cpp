#include "qkdn/report.hpp"

#include <sstream>

#include <json.hpp>

namespace qkdn {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json value_json(const BitString& v) {
    return {{"hex", v.to_hex()}, {"bits", v.size()}};
}

ordered_json verdict_json(const TrustVerdict& v) {
    ordered_json j;
    j["level"] = trust_level_name(v.level);
    j["determined_bits"] = v.determined_bits;
    j["engine"] = v.engine;
    if (v.posterior_entropy_bits)
        j["posterior_entropy_bits"] = *v.posterior_entropy_bits;
    if (v.correlation_witness)
        j["correlation_witness"] = *v.correlation_witness;
    return j;
}

ordered_json scenario_json(const Scenario& sc) {
    ordered_json j;
    j["protocol"] = sc.protocol;
    j["secret_bits"] = sc.secret_bits;
    if (sc.q)
        j["q"] = *sc.q;
    if (sc.t)
        j["t"] = *sc.t;
    if (sc.k)
        j["k"] = *sc.k;
    if (sc.pool_keys)
        j["pool_keys"] = *sc.pool_keys;
    ordered_json nodes = ordered_json::array();
    for (const auto& [name, kind] : sc.topology.nodes)
        nodes.push_back({{"name", name}, {"kind", kind}});
    j["nodes"] = std::move(nodes);
    ordered_json qlinks = ordered_json::array();
    for (const auto& [a, b] : sc.topology.qlinks)
        qlinks.push_back(a + "-" + b);
    j["qlinks"] = std::move(qlinks);
    ordered_json chans = ordered_json::array();
    for (const auto& c : sc.topology.cchannels)
        chans.push_back({{"channel", c.a + "-" + c.b}, {"secure", c.secure}});
    j["cchannels"] = std::move(chans);
    ordered_json taps = ordered_json::array();
    for (const auto& [channel, nodes_] : sc.taps)
        taps.push_back({{"channel", channel}, {"nodes", nodes_}});
    j["taps"] = std::move(taps);
    j["coalitions"] = sc.coalitions;
    return j;
}

std::string json_report(const RunReport& report) {
    ordered_json j;
    j["scenario"] = scenario_json(report.scenario);
    j["seed"] = report.seed;
    j["delivered"] = report.delivered;
    j["key_match"] = report.key_match;
    j["secret"] = value_json(report.secret);
    j["delivered_secret"] = value_json(report.delivered_secret);

    ordered_json keys = ordered_json::array();
    for (const DrawnKey& k : report.fabric->consumed_keys()) {
        ordered_json kj;
        kj["id"] = k.id;
        kj["hex"] = k.key.v.to_hex();
        kj["bits"] = k.key.v.size();
        keys.push_back(std::move(kj));
    }
    j["consumed_keys"] = std::move(keys);

    ordered_json wire = ordered_json::array();
    for (const WireRecord& r : report.fabric->wire()) {
        ordered_json w;
        w["seq"] = r.seq;
        w["channel"] = r.channel;
        w["from"] = r.from;
        w["to"] = r.to;
        w["label"] = r.label;
        w["hex"] = r.value.to_hex();
        w["bits"] = r.value.size();
        if (r.share_index)
            w["share_index"] = *r.share_index;
        wire.push_back(std::move(w));
    }
    j["wire"] = std::move(wire);

    ordered_json nodes = ordered_json::array();
    for (const auto& [name, v] : report.nodes) {
        ordered_json n;
        n["name"] = name;
        n.update(verdict_json(v));
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);

    ordered_json coalitions = ordered_json::array();
    for (const auto& [members, v] : report.coalitions) {
        ordered_json c;
        c["members"] = members;
        c.update(verdict_json(v));
        coalitions.push_back(std::move(c));
    }
    j["coalitions"] = std::move(coalitions);

    return j.dump(2) + "\n";
}

std::string text_report(const RunReport& report) {
    std::ostringstream out;
    out << "protocol: " << report.scenario.protocol << "\n";
    out << "seed: " << report.seed << "\n";
    out << "delivered: " << (report.delivered ? "yes" : "no") << "\n";
    out << "key_match: " << (report.key_match ? "yes" : "no") << "\n";
    out << "secret: " << report.secret.to_hex() << " (" << report.secret.size()
        << " bits)\n";
    out << "consumed_keys:\n";
    for (const DrawnKey& k : report.fabric->consumed_keys())
        out << "  " << k.id << " = " << k.key.v.to_hex() << "\n";
    out << "wire:\n";
    for (const WireRecord& r : report.fabric->wire()) {
        out << "  [" << r.seq << "] " << r.from << " -> " << r.to << " on " << r.channel
            << ": " << r.label << " = " << r.value.to_hex();
        if (r.share_index)
            out << " (share " << *r.share_index << ")";
        out << "\n";
    }
    out << "nodes:\n";
    for (const auto& [name, v] : report.nodes)
        out << "  " << name << ": " << verdict_line(v) << "\n";
    if (!report.coalitions.empty()) {
        out << "coalitions:\n";
        for (const auto& [members, v] : report.coalitions) {
            out << "  ";
            for (std::size_t i = 0; i < members.size(); ++i)
                out << (i ? "," : "") << members[i];
            out << ": " << verdict_line(v) << "\n";
        }
    }
    return out.str();
}

} // namespace

std::string verdict_line(const TrustVerdict& v) {
    std::ostringstream out;
    out << trust_level_name(v.level) << " (" << v.determined_bits
        << " bits determined, " << v.engine;
    if (v.posterior_entropy_bits)
        out << ", entropy " << *v.posterior_entropy_bits;
    if (v.correlation_witness)
        out << ", witness " << *v.correlation_witness;
    out << ")";
    return out.str();
}

std::string emit_report(const RunReport& report, const std::string& format) {
    if (format == "json")
        return json_report(report);
    if (format == "text")
        return text_report(report);
    throw ConfigError("unknown report format: " + format);
}

std::string emit_verdict(const std::vector<std::string>& members, const TrustVerdict& v,
                         const std::string& format) {
    if (format == "json") {
        ordered_json j;
        j["members"] = members;
        j.update(verdict_json(v));
        return j.dump(2) + "\n";
    }
    if (format == "text") {
        std::ostringstream out;
        for (std::size_t i = 0; i < members.size(); ++i)
            out << (i ? "," : "") << members[i];
        out << ": " << verdict_line(v) << "\n";
        return out.str();
    }
    throw ConfigError("unknown report format: " + format);
}

} // namespace qkdn
