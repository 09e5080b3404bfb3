#include "qkdn/dkms.hpp"

#include "qkdn/paths.hpp"
#include "qkdn/protocols.hpp"
#include "qkdn/secret_sharing.hpp"

namespace qkdn {

HalfSplit dkms_prepare(const TracedValue& party_random) {
    if (party_random.size() == 0 || party_random.size() % 2 != 0)
        throw ConfigError("dkms_prepare: party randomness must have even length");
    std::size_t half = party_random.size() / 2;
    HalfSplit out;
    out.original = party_random;
    out.first_half = party_random.slice(0, half);
    out.second_half = party_random.slice(half, half);
    out.xor_mask = out.first_half ^ out.second_half;
    return out;
}

BitString dkms_recover(const BitString& mask, const BitString& transmitted_half) {
    return mask ^ transmitted_half;
}

BitString dkms_compose_secret(const BitString& local_hidden_half,
                              const BitString& peer_hidden_half) {
    return concat_join(local_hidden_half, peer_hidden_half);
}

DkmsOutcome dkms_exchange(Fabric& f, const std::string& alice, const std::string& bob,
                          const std::string& satellite, const TracedValue& k_a,
                          const TracedValue& k_b, bool bob_first) {
    if (!f.has_node(satellite))
        throw ProtocolError("satellite node missing: " + satellite);
    const ClassicalChannel* up = f.find_cchannel(alice, satellite);
    const ClassicalChannel* down = f.find_cchannel(satellite, bob);
    if (!up || !up->secure || !down || !down->secure)
        throw ProtocolError("no secure satellite channel between " + alice + " and " + bob);

    HalfSplit a = dkms_prepare(k_a);
    HalfSplit b = dkms_prepare(k_b);
    f.log(alice, EntryRole::Computed, "K_A", a.original);
    f.log(alice, EntryRole::Computed, "K'_A1", a.first_half);
    f.log(alice, EntryRole::Computed, "K'_A2", a.second_half);
    f.log(alice, EntryRole::Computed, "K_X", a.xor_mask);
    f.log(bob, EntryRole::Computed, "K_B", b.original);
    f.log(bob, EntryRole::Computed, "K'_B1", b.first_half);
    f.log(bob, EntryRole::Computed, "K'_B2", b.second_half);
    f.log(bob, EntryRole::Computed, "K_Y", b.xor_mask);

    auto chain = find_disjoint_paths(f, alice, bob, 1, true).front();
    std::vector<std::string> back(chain.rbegin(), chain.rend());
    std::vector<std::string> sat_up{alice, satellite, bob};
    std::vector<std::string> sat_down{bob, satellite, alice};

    TracedValue kx_at_bob, ky_at_alice, a1_at_bob, b1_at_alice;
    auto alice_leg = [&] {
        kx_at_bob = forward_along_path(f, chain, "K_X", a.xor_mask);
        a1_at_bob = forward_along_path(f, sat_up, "K'_A1", a.first_half);
    };
    auto bob_leg = [&] {
        ky_at_alice = forward_along_path(f, back, "K_Y", b.xor_mask);
        b1_at_alice = forward_along_path(f, sat_down, "K'_B1", b.first_half);
    };
    if (bob_first) {
        bob_leg();
        alice_leg();
    } else {
        alice_leg();
        bob_leg();
    }

    TracedValue a2_at_bob = kx_at_bob ^ a1_at_bob;
    f.log(bob, EntryRole::Computed, "K'_A2", a2_at_bob);
    TracedValue b2_at_alice = ky_at_alice ^ b1_at_alice;
    f.log(alice, EntryRole::Computed, "K'_B2", b2_at_alice);

    TracedValue ks_alice = a.second_half.concat(b2_at_alice);
    TracedValue ks_bob = a2_at_bob.concat(b.second_half);
    f.log(alice, EntryRole::Computed, "K_S", ks_alice);
    f.log(bob, EntryRole::Computed, "K_S", ks_bob);

    DkmsOutcome out;
    out.alice_secret = ks_alice.v;
    out.bob_secret = ks_bob.v;
    out.alice_hidden_half = a.second_half.v;
    out.bob_hidden_half = b.second_half.v;
    out.share_material = {a.first_half.s, a.second_half.s, b.first_half.s,
                          b.second_half.s};
    out.secret_bits = ks_alice.s.bits();
    return out;
}

} // namespace qkdn
