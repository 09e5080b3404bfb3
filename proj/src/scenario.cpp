#include "qkdn/scenario.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "qkdn/field.hpp"

namespace qkdn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(value, &used, 10);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario: bad number for " + key + ": " + value);
    }
}

// "name:kind" with a mandatory kind.
std::pair<std::string, std::string> parse_node(const std::string& item) {
    std::size_t colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
        throw ConfigError("scenario: node needs name:kind, got " + item);
    return {trim(item.substr(0, colon)), trim(item.substr(colon + 1))};
}

TopologySpec::Chan parse_channel(const std::string& item) {
    std::string spec = item;
    bool secure = true;
    std::size_t colon = item.find(':');
    if (colon != std::string::npos) {
        std::string mode = trim(item.substr(colon + 1));
        if (mode == "secure")
            secure = true;
        else if (mode == "insecure")
            secure = false;
        else
            throw ConfigError("scenario: channel mode must be secure or insecure, got " +
                              mode);
        spec = trim(item.substr(0, colon));
    }
    auto [a, b] = split_endpoint_pair(spec);
    return {a, b, secure};
}

std::string single_kind(const TopologySpec& topo, NodeKind kind, const char* what) {
    const std::string* found = nullptr;
    for (const auto& n : topo.nodes)
        if (parse_node_kind(n.second) == kind) {
            if (found)
                throw ConfigError(std::string("scenario: more than one ") + what);
            found = &n.first;
        }
    if (!found)
        throw ConfigError(std::string("scenario: no ") + what + " declared");
    return *found;
}

std::string nth_end_host(const TopologySpec& topo, int which) {
    int seen = 0;
    for (const auto& n : topo.nodes)
        if (parse_node_kind(n.second) == NodeKind::EndHost) {
            if (seen == which)
                return n.first;
            ++seen;
        }
    throw ConfigError("scenario: needs exactly two end hosts");
}

} // namespace

std::string Scenario::alice() const { return nth_end_host(topology, 0); }
std::string Scenario::bob() const { return nth_end_host(topology, 1); }
std::string Scenario::satellite() const {
    return single_kind(topology, NodeKind::Satellite, "satellite");
}
std::string Scenario::central() const {
    return single_kind(topology, NodeKind::CentralKms, "central key manager");
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::string section;
    bool have_protocol = false, have_secret_bits = false;

    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("scenario: malformed section header: " + line);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "topology" && section != "scenario")
                throw ConfigError("scenario: unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario: expected key = value, got " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("scenario: key outside any section: " + key);

        if (section == "topology") {
            if (key == "nodes") {
                for (const std::string& item : split(value, ','))
                    sc.topology.nodes.push_back(parse_node(item));
            } else if (key == "qlinks") {
                for (const std::string& item : split(value, ','))
                    sc.topology.qlinks.push_back(split_endpoint_pair(item));
            } else if (key == "cchannels") {
                for (const std::string& item : split(value, ','))
                    sc.topology.cchannels.push_back(parse_channel(item));
            } else {
                throw ConfigError("scenario: unknown topology key: " + key);
            }
            continue;
        }

        if (key == "protocol") {
            sc.protocol = value;
            have_protocol = true;
        } else if (key == "secret_bits") {
            sc.secret_bits = parse_u64(key, value);
            have_secret_bits = true;
        } else if (key == "seed") {
            sc.seed = parse_u64(key, value);
        } else if (key == "q") {
            sc.q = parse_u64(key, value);
        } else if (key == "t") {
            sc.t = static_cast<unsigned>(parse_u64(key, value));
        } else if (key == "k") {
            sc.k = static_cast<unsigned>(parse_u64(key, value));
        } else if (key == "pool_keys") {
            sc.pool_keys = parse_u64(key, value);
        } else if (key == "coalitions") {
            for (const std::string& group : split(value, ';'))
                sc.coalitions.push_back(split(group, ','));
        } else if (key == "taps") {
            for (const std::string& tap : split(value, ';')) {
                std::size_t colon = tap.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("scenario: tap needs channel : nodes, got " + tap);
                std::string channel = trim(tap.substr(0, colon));
                std::vector<std::string> nodes = split(tap.substr(colon + 1), ',');
                if (nodes.empty())
                    throw ConfigError("scenario: tap lists no nodes: " + tap);
                sc.taps.emplace_back(channel, nodes);
            }
        } else {
            throw ConfigError("scenario: unknown scenario key: " + key);
        }
    }

    if (!have_protocol)
        throw ConfigError("scenario: missing protocol");
    if (!have_secret_bits)
        throw ConfigError("scenario: missing secret_bits");
    if (sc.secret_bits == 0)
        throw ConfigError("scenario: secret_bits must be positive");

    static const char* known[] = {"fat_chain", "pat_xor", "pat_shamir", "decentralized",
                                  "centralized"};
    bool ok = false;
    for (const char* p : known)
        ok = ok || sc.protocol == p;
    if (!ok)
        throw ConfigError("scenario: unknown protocol: " + sc.protocol);

    // Role and parameter consistency; the topology itself is validated when
    // the fabric is built.
    int hosts = 0;
    for (const auto& n : sc.topology.nodes)
        if (parse_node_kind(n.second) == NodeKind::EndHost)
            ++hosts;
    if (hosts != 2)
        throw ConfigError("scenario: needs exactly two end hosts, got " +
                          std::to_string(hosts));

    if (sc.protocol == "pat_xor" || sc.protocol == "pat_shamir") {
        if (!sc.k)
            throw ConfigError("scenario: " + sc.protocol + " needs k");
        if (*sc.k < 2)
            throw ConfigError("scenario: k must be at least 2");
    }
    if (sc.protocol == "pat_shamir") {
        if (!sc.q || !sc.t)
            throw ConfigError("scenario: pat_shamir needs q and t");
        if (!is_prime(*sc.q))
            throw ConfigError("scenario: q must be prime, got " + std::to_string(*sc.q));
        if (*sc.t < 1 || *sc.t > *sc.k)
            throw ConfigError("scenario: need 1 <= t <= k");
        if (*sc.k >= *sc.q)
            throw ConfigError("scenario: need k < q");
        std::size_t w = static_cast<std::size_t>(std::bit_width(*sc.q)) - 1;
        if (sc.secret_bits % w != 0)
            throw ConfigError("scenario: secret_bits must be a multiple of the chunk width " +
                              std::to_string(w));
    }
    if (sc.protocol == "decentralized") {
        if (sc.secret_bits % 2 != 0)
            throw ConfigError("scenario: decentralized needs even secret_bits");
        sc.satellite(); // must exist and be unique
    }
    if (sc.protocol == "centralized")
        sc.central();
    sc.alice();
    sc.bob();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace qkdn
