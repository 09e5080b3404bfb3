#include "qkdn/sim.hpp"

#include <bit>

#include "qkdn/ckms.hpp"
#include "qkdn/dkms.hpp"
#include "qkdn/paths.hpp"
#include "qkdn/protocols.hpp"

namespace qkdn {

namespace {

struct Execution {
    BitString secret;
    BitString delivered;
    AnalysisContext ctx;
};

void provision_links(Fabric& f, const std::vector<std::pair<std::string, std::size_t>>& needs,
                     const Scenario& sc, std::size_t key_bits, Rng& rng) {
    for (const auto& [link, count] : needs) {
        std::size_t n = sc.pool_keys.value_or(count);
        auto [a, b] = split_endpoint_pair(link);
        Rng stream = rng.stream("provision:" + link);
        f.provision(a, b, n, key_bits, stream);
    }
}

std::vector<std::pair<std::string, std::size_t>> chain_needs(
    const std::vector<std::string>& chain, std::size_t per_link) {
    std::vector<std::pair<std::string, std::size_t>> needs;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        needs.emplace_back(chain[i] + "-" + chain[i + 1], per_link);
    return needs;
}

TracedValue make_secret(Fabric& f, std::size_t bits, Rng& rng) {
    BitString v = rng.stream("secret").bits(bits);
    return {v, SymValue::of_vars(f.symbols().add_bits("K_S", v))};
}

Execution execute(Fabric& f, const Scenario& sc, Rng& rng) {
    Execution ex;
    const std::string alice = sc.alice();
    const std::string bob = sc.bob();

    if (sc.protocol == "fat_chain") {
        auto chain = find_disjoint_paths(f, alice, bob, 1, true);
        provision_links(f, chain_needs(chain[0], 1), sc, sc.secret_bits, rng);
        TracedValue secret = make_secret(f, sc.secret_bits, rng);
        FatOutcome out = fat_send(f, alice, bob, secret);
        ex.secret = secret.v;
        ex.delivered = out.delivered;
        ex.ctx = {TargetSpec{secret.s.bits(), {}, 0}, {}};
        return ex;
    }

    if (sc.protocol == "pat_xor" || sc.protocol == "pat_shamir") {
        auto paths = find_disjoint_paths(f, alice, bob, *sc.k, true);
        MultipathScheme scheme;
        std::size_t payload_bits = sc.secret_bits;
        if (sc.protocol == "pat_xor") {
            scheme.kind = MultipathScheme::Kind::Xor;
        } else {
            scheme.kind = MultipathScheme::Kind::Shamir;
            scheme.t = *sc.t;
            scheme.q = *sc.q;
            std::size_t w = static_cast<std::size_t>(std::bit_width(*sc.q)) - 1;
            payload_bits = (sc.secret_bits / w) * bits_for(*sc.q);
        }
        scheme.k = *sc.k;
        std::vector<std::pair<std::string, std::size_t>> needs;
        for (const auto& path : paths)
            for (const auto& need : chain_needs(path, 1))
                needs.push_back(need);
        provision_links(f, needs, sc, payload_bits, rng);
        TracedValue secret = make_secret(f, sc.secret_bits, rng);
        Rng proto = rng.stream("protocol");
        MultipathOutcome out =
            pat_multipath_send(f, alice, bob, secret, scheme, paths, proto);
        ex.secret = secret.v;
        ex.delivered = out.delivered;
        ex.ctx = {TargetSpec{secret.s.bits(), {}, 0}, out.share_material};
        return ex;
    }

    if (sc.protocol == "decentralized") {
        auto chain = find_disjoint_paths(f, alice, bob, 1, true);
        // Two pads per terrestrial link, one per direction, at half length.
        provision_links(f, chain_needs(chain[0], 2), sc, sc.secret_bits / 2, rng);
        BitString ka = rng.stream("party:" + alice).bits(sc.secret_bits);
        BitString kb = rng.stream("party:" + bob).bits(sc.secret_bits);
        TracedValue a{ka, SymValue::of_vars(f.symbols().add_bits("K_A", ka))};
        TracedValue b{kb, SymValue::of_vars(f.symbols().add_bits("K_B", kb))};
        DkmsOutcome out = dkms_exchange(f, alice, bob, sc.satellite(), a, b);
        ex.secret = out.alice_secret;
        ex.delivered = out.bob_secret;
        ex.ctx = {TargetSpec{out.secret_bits, {}, 0}, out.share_material};
        return ex;
    }

    // centralized
    auto chain = find_disjoint_paths(f, alice, bob, 1, true);
    provision_links(f, chain_needs(chain[0], 1), sc, sc.secret_bits, rng);
    TracedValue secret = make_secret(f, sc.secret_bits, rng);
    CkmsOutcome out = centralized_send(f, alice, bob, sc.central(), secret);
    ex.secret = secret.v;
    ex.delivered = out.delivered;
    ex.ctx = {TargetSpec{secret.s.bits(), {}, 0}, {}};
    return ex;
}

} // namespace

RunReport run_scenario(const Scenario& sc, std::uint64_t seed) {
    auto fabric = std::make_shared<Fabric>(Fabric::build(sc.topology));
    Fabric& f = *fabric;
    for (const auto& [channel, nodes] : sc.taps)
        for (const std::string& node : nodes)
            f.add_tap(channel, node);

    Rng rng(seed);
    Execution ex = execute(f, sc, rng);

    RunReport report;
    report.scenario = sc;
    report.seed = seed;
    report.delivered = true;
    report.key_match = ex.secret == ex.delivered;
    report.secret = ex.secret;
    report.delivered_secret = ex.delivered;
    for (const Node& n : f.nodes())
        report.nodes.emplace_back(n.name, classify_node(f, n.name, ex.ctx));
    for (const auto& members : sc.coalitions)
        report.coalitions.emplace_back(members, classify_coalition(f, members, ex.ctx));
    report.fabric = fabric;
    return report;
}

TrustVerdict analyze_coalition(const Scenario& sc, std::uint64_t seed,
                               const std::vector<std::string>& members) {
    auto fabric = std::make_shared<Fabric>(Fabric::build(sc.topology));
    Fabric& f = *fabric;
    for (const auto& [channel, nodes] : sc.taps)
        for (const std::string& node : nodes)
            f.add_tap(channel, node);
    Rng rng(seed);
    Execution ex = execute(f, sc, rng);
    return classify_coalition(f, members, ex.ctx);
}

} // namespace qkdn
