#include "doctest.h"

#include "qkdn/paths.hpp"

using namespace qkdn;

namespace {

Fabric two_chains() {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"},
                  {"n1", "relay"},
                  {"n2", "relay"},
                  {"bob", "end_host"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}, {"alice", "n2"}, {"n2", "bob"}};
    return Fabric::build(spec);
}

} // namespace

TEST_CASE("finds node-disjoint quantum paths, smallest names first") {
    Fabric f = two_chains();
    auto one = find_disjoint_paths(f, "alice", "bob", 1, true);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == std::vector<std::string>{"alice", "n1", "bob"});

    auto two = find_disjoint_paths(f, "alice", "bob", 2, true);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == std::vector<std::string>{"alice", "n1", "bob"});
    CHECK(two[1] == std::vector<std::string>{"alice", "n2", "bob"});

    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "bob", 3, true), ProtocolError);
    CHECK(find_disjoint_paths(f, "alice", "bob", 2, true) == two);
}

TEST_CASE("a shared interior node caps the disjoint path count") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"},
                  {"n1", "relay"},
                  {"n2", "relay"},
                  {"hub", "relay"},
                  {"bob", "end_host"}};
    spec.qlinks = {{"alice", "n1"}, {"alice", "n2"}, {"n1", "hub"},
                   {"n2", "hub"},   {"hub", "bob"}};
    Fabric f = Fabric::build(spec);
    auto one = find_disjoint_paths(f, "alice", "bob", 1, true);
    CHECK(one[0] == std::vector<std::string>{"alice", "n1", "hub", "bob"});
    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "bob", 2, true), ProtocolError);
}

TEST_CASE("secure classical channels count as edges unless quantum_only") {
    TopologySpec spec;
    spec.nodes = {{"alice", "end_host"}, {"n1", "relay"}, {"bob", "end_host"},
                  {"sat", "satellite"},  {"eve", "relay"}};
    spec.qlinks = {{"alice", "n1"}, {"n1", "bob"}};
    spec.cchannels = {{"alice", "sat", true},
                      {"sat", "bob", true},
                      {"alice", "eve", false},
                      {"eve", "bob", false}};
    Fabric f = Fabric::build(spec);

    auto quantum = find_disjoint_paths(f, "alice", "bob", 1, true);
    CHECK(quantum[0] == std::vector<std::string>{"alice", "n1", "bob"});
    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "bob", 2, true), ProtocolError);

    auto both = find_disjoint_paths(f, "alice", "bob", 2, false);
    CHECK(both[0] == std::vector<std::string>{"alice", "n1", "bob"});
    CHECK(both[1] == std::vector<std::string>{"alice", "sat", "bob"});

    // Insecure channels are never path edges.
    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "bob", 3, false), ProtocolError);
}

TEST_CASE("path search validates its arguments") {
    Fabric f = two_chains();
    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "bob", 0, true), ConfigError);
    CHECK_THROWS_AS(find_disjoint_paths(f, "alice", "alice", 1, true), ConfigError);
    CHECK_THROWS_AS(find_disjoint_paths(f, "ghost", "bob", 1, true), ConfigError);
}
