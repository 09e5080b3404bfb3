#include "doctest.h"

#include <cmath>

#include "qkdn/analyzer.hpp"
#include "qkdn/ckms.hpp"
#include "qkdn/dkms.hpp"
#include "qkdn/paths.hpp"
#include "qkdn/protocols.hpp"

using namespace qkdn;

namespace {

Fabric lone_node() {
    TopologySpec spec;
    spec.nodes = {{"r", "relay"}, {"x", "relay"}};
    return Fabric::build(spec);
}

TracedValue traced(Fabric& f, const std::string& name, const std::string& bits) {
    BitString v = BitString::from_bits(bits);
    return {v, SymValue::of_vars(f.symbols().add_bits(name, v))};
}

TargetSpec bit_target(const SymValue& secret) {
    TargetSpec t;
    t.bits = secret.bits();
    return t;
}

} // namespace

TEST_CASE("a held pad plus its ciphertext deduces every secret bit") {
    Fabric f = lone_node();
    TracedValue ka1 = traced(f, "K_A1", "0110");
    TracedValue k12 = traced(f, "K_12", "0011");
    TracedValue ks = traced(f, "K_S", "1010");
    f.log("r", EntryRole::HeldKey, "K_A1", ka1);
    f.log("r", EntryRole::HeldKey, "K_12", k12);
    f.log("r", EntryRole::Received, "K_S⊕K_A1", ks ^ ka1);

    LinearView view = build_linear_view(f, {"r"});
    CHECK(view.rows.size() == 12);

    SpanResult span = span_closure(f, view, ks.s.bits());
    CHECK(span.determined_count == 4);
    CHECK(span.deduced == std::vector<int>{1, 0, 1, 0});

    AnalysisContext ctx{bit_target(ks.s), {}};
    TrustVerdict v = classify_node(f, "r", ctx);
    CHECK(v.level == TrustLevel::FAT);
    CHECK(v.determined_bits == 4);
    CHECK(v.engine == "linear");

    // The empty transcript next door deduces nothing.
    TrustVerdict empty = classify_node(f, "x", ctx);
    CHECK(empty.level == TrustLevel::NAT);
    CHECK(empty.determined_bits == 0);
}

TEST_CASE("partial determination is partial trust") {
    Fabric f = lone_node();
    TracedValue ks = traced(f, "K_S", "1010");
    f.log("r", EntryRole::Computed, "K_S[0]", ks.slice(0, 1));
    AnalysisContext ctx{bit_target(ks.s), {}};
    TrustVerdict v = classify_node(f, "r", ctx);
    CHECK(v.level == TrustLevel::PAT);
    CHECK(v.determined_bits == 1);
}

TEST_CASE("a fragment leaves the secret uniform but correlated") {
    Fabric f = lone_node();
    TracedValue ks = traced(f, "K_S", "1011");
    TracedValue frag = traced(f, "K_S1", "0110");
    TracedValue closing = ks ^ frag;
    f.log("r", EntryRole::Received, "K_S1", frag);
    AnalysisContext ctx{bit_target(ks.s), {frag.s, closing.s}};

    TrustVerdict lin = classify_node(f, "r", ctx, Engine::Linear);
    CHECK(lin.level == TrustLevel::PAT);
    CHECK(lin.determined_bits == 0);
    REQUIRE(lin.correlation_witness.has_value());
    CHECK(*lin.correlation_witness == "K_S1");

    TrustVerdict en = classify_node(f, "r", ctx, Engine::Enumeration);
    CHECK(en.level == TrustLevel::PAT);
    REQUIRE(en.posterior_entropy_bits.has_value());
    CHECK(*en.posterior_entropy_bits == doctest::Approx(4.0));

    // Unrelated observations stay NAT.
    Fabric g = lone_node();
    TracedValue gks = traced(g, "K_S", "1011");
    TracedValue gfrag = traced(g, "K_S1", "0110");
    TracedValue noise = traced(g, "noise", "0101");
    g.log("r", EntryRole::Received, "noise", noise);
    AnalysisContext gctx{bit_target(gks.s), {gfrag.s, (gks ^ gfrag).s}};
    CHECK(classify_node(g, "r", gctx, Engine::Linear).level == TrustLevel::NAT);
    CHECK(classify_node(g, "r", gctx, Engine::Enumeration).level == TrustLevel::NAT);
}

TEST_CASE("an unknown pad hides the secret entirely") {
    Fabric f = lone_node();
    TracedValue ks = traced(f, "K_S", "1010");
    TracedValue key = traced(f, "K", "0110");
    f.log("r", EntryRole::Received, "K_S⊕K", ks ^ key);

    AnalysisContext ctx{bit_target(ks.s), {}};
    CHECK(classify_node(f, "r", ctx, Engine::Linear).level == TrustLevel::NAT);

    PosteriorResult p = posterior_entropy(f, {"r"}, ctx);
    CHECK(p.states == 16);
    CHECK(p.uniform_over_prior);
    CHECK(p.entropy_bits == doctest::Approx(4.0));
    CHECK_FALSE(p.material_dependent);
}

TEST_CASE("classification needs existing members and matching engines") {
    Fabric f = lone_node();
    TracedValue ks = traced(f, "K_S", "1010");
    AnalysisContext ctx{bit_target(ks.s), {}};
    CHECK_THROWS_AS(classify_node(f, "ghost", ctx), ConfigError);
    CHECK(classify(f, {}, ctx).level == TrustLevel::NAT);

    TargetSpec field_target;
    field_target.field_var = f.symbols().add_field("S", 7, 3);
    field_target.q = 7;
    AnalysisContext fctx{field_target, {}};
    CHECK_THROWS_AS(classify_node(f, "r", fctx, Engine::Linear), std::invalid_argument);
    // Auto falls back to enumeration for field targets.
    CHECK(classify_node(f, "r", fctx).engine == "enumeration");
}

TEST_CASE("oversized enumeration domains are refused") {
    Fabric f = lone_node();
    TargetSpec t;
    t.field_var = f.symbols().add_field("S", 4099, 5);
    t.q = 4099;
    VarId other = f.symbols().add_field("A", 4099, 7);
    FieldExpr sum = FieldExpr::of_var(4099, t.field_var.value())
                        .add(FieldExpr::of_var(4099, other));
    TracedValue entry{PrimeField(4099).encode(12), SymValue::of_field(sum)};
    f.log("r", EntryRole::Received, "S+A", entry);
    AnalysisContext ctx{t, {}};
    CHECK_THROWS_AS(posterior_entropy(f, {"r"}, ctx), ConfigError);
}

TEST_CASE("chain relays and end hosts are fully trusted in chain forwarding") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"n1", "relay"}, {"bob", "end_host"},
                  {"eve", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}, {"n1", "eve"}};
    Fabric f = Fabric::build(spec);
    Rng rng(5);
    f.provision("alice", "n1", 1, 8, rng);
    f.provision("n1", "bob", 1, 8, rng);
    TracedValue ks = traced(f, "K_S", "10110010");
    fat_send(f, "alice", "bob", ks);

    AnalysisContext ctx{bit_target(ks.s), {}};
    for (const char* node : {"alice", "n1", "bob"}) {
        TrustVerdict v = classify_node(f, node, ctx);
        CHECK(v.level == TrustLevel::FAT);
        CHECK(v.determined_bits == 8);
    }
    CHECK(classify_node(f, "eve", ctx).level == TrustLevel::NAT);
}

TEST_CASE("xor multipath relays are partially trusted, coalitions escalate") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}, {"n1", "relay"},
                  {"n2", "relay"},       {"eve", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}, {"alice", "n2"},
                   {"n2", "bob"},   {"eve", "n1"}};
    Fabric f = Fabric::build(spec);
    Rng rng(11);
    for (const char* hop : {"n1", "n2"}) {
        f.provision("alice", hop, 1, 6, rng);
        f.provision(hop, "bob", 1, 6, rng);
    }
    TracedValue ks = traced(f, "K_S", "101101");
    MultipathScheme scheme;
    scheme.kind = MultipathScheme::Kind::Xor;
    scheme.k = 2;
    Rng proto = rng.stream("protocol");
    auto paths = find_disjoint_paths(f, "alice", "bob", 2, true);
    MultipathOutcome out = pat_multipath_send(f, "alice", "bob", ks, scheme, paths, proto);
    REQUIRE(out.delivered == ks.v);

    AnalysisContext ctx{bit_target(ks.s), out.share_material};
    for (Engine engine : {Engine::Linear, Engine::Enumeration}) {
        CHECK(classify_node(f, "alice", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "bob", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "n1", ctx, engine).level == TrustLevel::PAT);
        CHECK(classify_node(f, "n2", ctx, engine).level == TrustLevel::PAT);
        CHECK(classify_node(f, "eve", ctx, engine).level == TrustLevel::NAT);
        CHECK(classify_coalition(f, {"n1", "n2"}, ctx, engine).level == TrustLevel::FAT);
    }
    TrustVerdict relay = classify_node(f, "n1", ctx);
    CHECK(relay.determined_bits == 0);
    CHECK(relay.correlation_witness.has_value());
}

TEST_CASE("shamir multipath verdicts respect the threshold") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}};
    for (int i = 1; i <= 3; ++i) {
        std::string r = "n" + std::to_string(i);
        spec.nodes.push_back({r, "relay"});
        spec.qlinks.push_back({"alice", r});
        spec.qlinks.push_back({r, "bob"});
    }
    Fabric f = Fabric::build(spec);
    Rng rng(13);
    for (int i = 1; i <= 3; ++i) {
        std::string r = "n" + std::to_string(i);
        f.provision("alice", r, 1, 3, rng);
        f.provision(r, "bob", 1, 3, rng);
    }
    VarId s = f.symbols().add_field("K_S", 7, 5);
    TracedValue secret{PrimeField(7).encode(5), SymValue::of_field(FieldExpr::of_var(7, s))};
    MultipathScheme scheme;
    scheme.kind = MultipathScheme::Kind::Shamir;
    scheme.k = 3;
    scheme.t = 2;
    scheme.q = 7;
    scheme.field_mode = true;
    Rng proto = rng.stream("protocol");
    auto paths = find_disjoint_paths(f, "alice", "bob", 3, true);
    MultipathOutcome out = pat_multipath_send(f, "alice", "bob", secret, scheme, paths, proto);
    REQUIRE(out.delivered == secret.v);

    TargetSpec t;
    t.field_var = s;
    t.q = 7;
    AnalysisContext ctx{t, out.share_material};

    TrustVerdict one = classify_node(f, "n1", ctx);
    CHECK(one.level == TrustLevel::PAT);
    CHECK(one.engine == "enumeration");
    CHECK(*one.posterior_entropy_bits == doctest::Approx(std::log2(7.0)));

    TrustVerdict two = classify_coalition(f, {"n1", "n2"}, ctx);
    CHECK(two.level == TrustLevel::FAT);
    CHECK(*two.posterior_entropy_bits == doctest::Approx(0.0));
    CHECK(two.determined_bits == 3);

    CHECK(classify_coalition(f, {"alice"}, ctx).level == TrustLevel::FAT);
    CHECK(classify_coalition(f, {"bob"}, ctx).level == TrustLevel::FAT);
}

TEST_CASE("raw and presolved enumeration agree on a small field run") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}, {"n1", "relay"},
                  {"n2", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}, {"alice", "n2"}, {"n2", "bob"}};
    Fabric f = Fabric::build(spec);
    Rng rng(37);
    for (const char* r : {"n1", "n2"}) {
        f.provision("alice", r, 1, 3, rng);
        f.provision(r, "bob", 1, 3, rng);
    }
    VarId s = f.symbols().add_field("K_S", 5, 2);
    TracedValue secret{PrimeField(5).encode(2), SymValue::of_field(FieldExpr::of_var(5, s))};
    MultipathScheme scheme;
    scheme.kind = MultipathScheme::Kind::Shamir;
    scheme.k = 2;
    scheme.t = 2;
    scheme.q = 5;
    scheme.field_mode = true;
    Rng proto = rng.stream("protocol");
    auto paths = find_disjoint_paths(f, "alice", "bob", 2, true);
    MultipathOutcome out = pat_multipath_send(f, "alice", "bob", secret, scheme, paths, proto);
    REQUIRE(out.delivered == secret.v);

    TargetSpec t;
    t.field_var = s;
    t.q = 5;
    AnalysisContext ctx{t, out.share_material};
    for (const char* member : {"n1", "n2", "bob"}) {
        PosteriorResult presolved =
            posterior_entropy(f, {member}, ctx, EnumMode::Presolve);
        PosteriorResult raw = posterior_entropy(f, {member}, ctx, EnumMode::Raw);
        CAPTURE(member);
        // Raw states also range over untouched variables, so distributions
        // match up to that constant factor.
        REQUIRE(presolved.counts.size() == raw.counts.size());
        for (std::size_t i = 0; i < presolved.counts.size(); ++i) {
            CHECK(presolved.counts[i].first == raw.counts[i].first);
            CHECK(presolved.counts[i].second * raw.states ==
                  raw.counts[i].second * presolved.states);
        }
        CHECK(presolved.determined == raw.determined);
        CHECK(presolved.uniform_over_prior == raw.uniform_over_prior);
        CHECK(presolved.material_dependent == raw.material_dependent);
        CHECK(presolved.entropy_bits == doctest::Approx(raw.entropy_bits));
    }
}

TEST_CASE("decentralized verdicts: ends full, relays and satellite partial") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"},
                  {"n1", "relay"},
                  {"bob", "end_host"},
                  {"sat", "satellite"},
                  {"eve", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}, {"eve", "n1"}};
    spec.cchannels = {{"alice", "sat", true}, {"sat", "bob", true}};
    Fabric f = Fabric::build(spec);
    Rng rng(17);
    f.provision("alice", "n1", 2, 4, rng);
    f.provision("n1", "bob", 2, 4, rng);
    TracedValue ka = traced(f, "K_A", "10110100");
    TracedValue kb = traced(f, "K_B", "01011100");
    DkmsOutcome out = dkms_exchange(f, "alice", "bob", "sat", ka, kb);

    TargetSpec t;
    t.bits = out.secret_bits;
    AnalysisContext ctx{t, out.share_material};
    for (Engine engine : {Engine::Linear, Engine::Enumeration}) {
        CHECK(classify_node(f, "alice", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "bob", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "n1", ctx, engine).level == TrustLevel::PAT);
        CHECK(classify_node(f, "sat", ctx, engine).level == TrustLevel::PAT);
        CHECK(classify_node(f, "eve", ctx, engine).level == TrustLevel::NAT);
    }
    // Terrestrial and satellite views together rebuild both hidden halves.
    CHECK(classify_coalition(f, {"n1", "sat"}, ctx).level == TrustLevel::FAT);
}

TEST_CASE("centralized verdicts: everyone but the ends learns nothing") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}, {"kms", "central_kms"},
                  {"n1", "relay"},       {"n2", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "n2"}, {"n2", "bob"}};
    spec.cchannels = {{"alice", "kms", true},
                      {"n1", "kms", true},
                      {"n2", "kms", true},
                      {"kms", "bob", true}};
    Fabric f = Fabric::build(spec);
    Rng rng(23);
    f.provision("alice", "n1", 1, 6, rng);
    f.provision("n1", "n2", 1, 6, rng);
    f.provision("n2", "bob", 1, 6, rng);
    TracedValue ks = traced(f, "K_S", "110100");
    CkmsOutcome out = centralized_send(f, "alice", "bob", "kms", ks);
    REQUIRE(out.delivered == ks.v);

    AnalysisContext ctx{bit_target(ks.s), {}};
    for (Engine engine : {Engine::Linear, Engine::Enumeration}) {
        CHECK(classify_node(f, "alice", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "bob", ctx, engine).level == TrustLevel::FAT);
        CHECK(classify_node(f, "n1", ctx, engine).level == TrustLevel::NAT);
        CHECK(classify_node(f, "n2", ctx, engine).level == TrustLevel::NAT);
        CHECK(classify_node(f, "kms", ctx, engine).level == TrustLevel::NAT);
    }
}

TEST_CASE("tapping the delivery channel flips the last relay to full trust") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}, {"kms", "central_kms"},
                  {"n1", "relay"},       {"n2", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "n2"}, {"n2", "bob"}};
    spec.cchannels = {{"alice", "kms", true},
                      {"n1", "kms", true},
                      {"n2", "kms", true},
                      {"kms", "bob", true}};
    Fabric f = Fabric::build(spec);
    f.add_tap("kms-bob", "n2");
    f.add_tap("kms-bob", "n1");
    Rng rng(29);
    f.provision("alice", "n1", 1, 6, rng);
    f.provision("n1", "n2", 1, 6, rng);
    f.provision("n2", "bob", 1, 6, rng);
    TracedValue ks = traced(f, "K_S", "011011");
    centralized_send(f, "alice", "bob", "kms", ks);

    AnalysisContext ctx{bit_target(ks.s), {}};
    // n2 holds the last link key and now sees the fold.
    TrustVerdict v2 = classify_node(f, "n2", ctx);
    CHECK(v2.level == TrustLevel::FAT);
    CHECK(v2.determined_bits == 6);
    // n1 lacks that key; the fold still looks uniform to it.
    CHECK(classify_node(f, "n1", ctx).level == TrustLevel::NAT);
}

TEST_CASE("verdicts are monotone under coalition growth") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"bob", "end_host"}, {"n1", "relay"},
                  {"n2", "relay"},       {"n3", "relay"}};
    for (const char* r : {"n1", "n2", "n3"}) {
        spec.qlinks.push_back({"alice", r});
        spec.qlinks.push_back({r, "bob"});
    }
    Fabric f = Fabric::build(spec);
    Rng rng(31);
    for (const char* r : {"n1", "n2", "n3"}) {
        f.provision("alice", r, 1, 4, rng);
        f.provision(r, "bob", 1, 4, rng);
    }
    TracedValue ks = traced(f, "K_S", "1001");
    MultipathScheme scheme;
    scheme.kind = MultipathScheme::Kind::Xor;
    scheme.k = 3;
    Rng proto = rng.stream("protocol");
    auto paths = find_disjoint_paths(f, "alice", "bob", 3, true);
    MultipathOutcome out = pat_multipath_send(f, "alice", "bob", ks, scheme, paths, proto);
    AnalysisContext ctx{bit_target(ks.s), out.share_material};

    auto rank = [&](const std::vector<std::string>& members) {
        return static_cast<int>(classify_coalition(f, members, ctx).level);
    };
    CHECK(rank({"n1"}) <= rank({"n1", "n2"}));
    CHECK(rank({"n1", "n2"}) <= rank({"n1", "n2", "n3"}));
    CHECK(rank({"n1", "n2", "n3"}) == static_cast<int>(TrustLevel::FAT));
    CHECK(rank({"n1", "n2"}) == static_cast<int>(TrustLevel::PAT));
}

TEST_CASE("both engines agree on random linear views") {
    for (int trial = 0; trial < 50; ++trial) {
        Fabric f = lone_node();
        Rng rng(10'000 + trial);
        TracedValue ks = traced(f, "K_S", rng.bits(4).to_bits());
        TracedValue m1 = traced(f, "M1", rng.bits(4).to_bits());
        TracedValue m2 = traced(f, "M2", rng.bits(4).to_bits());
        std::vector<TracedValue> pool = {ks, m1, m2, ks ^ m1, m1 ^ m2, ks ^ m2};
        unsigned picks = 1 + static_cast<unsigned>(rng.below(3));
        for (unsigned i = 0; i < picks; ++i) {
            const TracedValue& e = pool[rng.below(pool.size())];
            f.log("r", EntryRole::Received, "e" + std::to_string(i), e);
        }
        AnalysisContext ctx{bit_target(ks.s), {m1.s, (ks ^ m1).s}};
        TrustVerdict lin = classify_node(f, "r", ctx, Engine::Linear);
        TrustVerdict en = classify_node(f, "r", ctx, Engine::Enumeration);
        CAPTURE(trial);
        CHECK(lin.level == en.level);
        CHECK(lin.determined_bits == en.determined_bits);
    }
}
