#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qkdn/ckms.hpp"
#include "qkdn/report.hpp"
#include "qkdn/scenario.hpp"
#include "qkdn/sim.hpp"

namespace {

using namespace qkdn;

// Precedence: scenario file, then QKDN_SEED, then --seed.
std::uint64_t resolve_seed(const Scenario& sc, const std::optional<std::uint64_t>& flag) {
    std::uint64_t seed = sc.seed.value_or(0);
    if (const char* env = std::getenv("QKDN_SEED")) {
        try {
            std::size_t used = 0;
            seed = std::stoull(env, &used, 10);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad QKDN_SEED: ") + env);
        }
    }
    if (flag)
        seed = *flag;
    return seed;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write output file: " + out_path);
    out << text;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos)
            out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

// Built-in invariant battery for `check`: one scenario per protocol plus the
// cross-cutting identities. Prints one line per check.
int self_check(std::ostream& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        out << (ok ? "ok " : "FAILED ") << name << "\n";
        if (!ok)
            ++failures;
    };
    auto level_of = [](const RunReport& r, const std::string& node) {
        for (const auto& [name, v] : r.nodes)
            if (name == node)
                return v.level;
        throw ConfigError("no verdict for " + node);
    };

    const std::string chain_topology =
        "[topology]\n"
        "nodes = alice:end_host, n1:relay, n2:relay, bob:end_host\n"
        "qlinks = alice-n1, n1-n2, n2-bob\n";

    {
        Scenario sc = parse_scenario(chain_topology +
                                     "[scenario]\nprotocol = fat_chain\nsecret_bits = 8\n");
        RunReport r = run_scenario(sc, 1);
        check("fat_chain delivers the secret", r.key_match);
        check("fat_chain relays are FAT", level_of(r, "n1") == TrustLevel::FAT &&
                                              level_of(r, "n2") == TrustLevel::FAT);
        RunReport again = run_scenario(sc, 1);
        check("identical runs serialize identically",
              emit_report(r, "json") == emit_report(again, "json"));
    }
    {
        Scenario sc = parse_scenario(
            "[topology]\n"
            "nodes = alice:end_host, n1:relay, n2:relay, bob:end_host\n"
            "qlinks = alice-n1, n1-bob, alice-n2, n2-bob\n"
            "[scenario]\nprotocol = pat_xor\nsecret_bits = 8\nk = 2\n"
            "coalitions = n1,n2\n");
        RunReport r = run_scenario(sc, 2);
        check("pat_xor delivers the secret", r.key_match);
        check("pat_xor relays are PAT", level_of(r, "n1") == TrustLevel::PAT &&
                                            level_of(r, "n2") == TrustLevel::PAT);
        check("pat_xor full coalition is FAT",
              r.coalitions.size() == 1 && r.coalitions[0].second.level == TrustLevel::FAT);
    }
    {
        Scenario sc = parse_scenario(
            "[topology]\n"
            "nodes = alice:end_host, n1:relay, n2:relay, n3:relay, bob:end_host\n"
            "qlinks = alice-n1, n1-bob, alice-n2, n2-bob, alice-n3, n3-bob\n"
            "[scenario]\nprotocol = pat_shamir\nsecret_bits = 4\nk = 3\nt = 2\nq = 5\n");
        RunReport r = run_scenario(sc, 3);
        check("pat_shamir delivers the secret", r.key_match);
        check("pat_shamir relays are PAT", level_of(r, "n1") == TrustLevel::PAT &&
                                               level_of(r, "n2") == TrustLevel::PAT &&
                                               level_of(r, "n3") == TrustLevel::PAT);
    }
    {
        Scenario sc = parse_scenario(
            "[topology]\n"
            "nodes = alice:end_host, n1:relay, bob:end_host, sat:satellite\n"
            "qlinks = alice-n1, n1-bob\n"
            "cchannels = alice-sat:secure, sat-bob:secure\n"
            "[scenario]\nprotocol = decentralized\nsecret_bits = 8\n");
        RunReport r = run_scenario(sc, 4);
        check("decentralized parties agree", r.key_match);
        check("decentralized relay and satellite are PAT",
              level_of(r, "n1") == TrustLevel::PAT &&
                  level_of(r, "sat") == TrustLevel::PAT);
        bool hidden_off_wire = true;
        for (const WireRecord& w : r.fabric->wire())
            hidden_off_wire = hidden_off_wire && w.value != r.secret;
        check("decentralized secret never crosses the wire", hidden_off_wire);
    }
    {
        Scenario sc = parse_scenario(
            "[topology]\n"
            "nodes = alice:end_host, n1:relay, n2:relay, bob:end_host, kms:central_kms\n"
            "qlinks = alice-n1, n1-n2, n2-bob\n"
            "cchannels = alice-kms:secure, n1-kms:secure, n2-kms:secure, kms-bob:secure\n"
            "[scenario]\nprotocol = centralized\nsecret_bits = 8\n");
        RunReport r = run_scenario(sc, 5);
        check("centralized delivers the secret", r.key_match);
        check("centralized relays and manager are NAT",
              level_of(r, "n1") == TrustLevel::NAT &&
                  level_of(r, "n2") == TrustLevel::NAT &&
                  level_of(r, "kms") == TrustLevel::NAT);
        // Telescoping: the fold that reaches bob equals K_S xor the last key.
        const auto& wire = r.fabric->wire();
        const auto& keys = r.fabric->consumed_keys();
        bool telescoped = !wire.empty() && !keys.empty() &&
                          wire.back().value == (r.secret ^ keys.back().key.v);
        check("centralized fold telescopes to K_S xor last key", telescoped);
    }
    return failures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic QKD-network key-management protocol simulator"};
    app.require_subcommand(1);

    std::string run_file, analyze_file, coalition_csv;
    std::string format = "json", out_path;
    std::optional<std::uint64_t> seed_flag;

    CLI::App* cmd_run = app.add_subcommand("run", "execute a scenario and report");
    cmd_run->add_option("file", run_file, "scenario file")->required();

    CLI::App* cmd_analyze =
        app.add_subcommand("analyze", "classify one coalition after a run");
    cmd_analyze->add_option("file", analyze_file, "scenario file")->required();
    cmd_analyze->add_option("--coalition", coalition_csv, "comma-separated node names")
        ->required();

    CLI::App* cmd_check = app.add_subcommand("check", "run the invariant suite");

    for (CLI::App* cmd : {cmd_run, cmd_analyze}) {
        cmd->add_option("--seed", seed_flag, "seed override");
        cmd->add_option("--format", format, "json or text");
        cmd->add_option("--out", out_path, "write the report to a file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            Scenario sc = load_scenario_file(run_file);
            RunReport report = run_scenario(sc, resolve_seed(sc, seed_flag));
            write_output(emit_report(report, format), out_path);
            return 0;
        }
        if (cmd_analyze->parsed()) {
            Scenario sc = load_scenario_file(analyze_file);
            std::vector<std::string> members = split_names(coalition_csv);
            TrustVerdict v = analyze_coalition(sc, resolve_seed(sc, seed_flag), members);
            write_output(emit_verdict(members, v, format), out_path);
            return 0;
        }
        if (cmd_check->parsed()) {
            int failures = self_check(std::cout);
            if (failures) {
                std::cerr << failures << " checks failed\n";
                return 1;
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ProtocolError& e) {
        std::cerr << "protocol abort: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
