#include "qkdn/ckms.hpp"

#include "qkdn/paths.hpp"

namespace qkdn {

Mask make_alice_mask(const std::string& alice, const TracedValue& secret,
                     const DrawnKey& first_link_key) {
    if (secret.size() != first_link_key.key.size())
        throw ConfigError("make_alice_mask: length mismatch");
    return {alice, "K_S⊕" + first_link_key.id, secret ^ first_link_key.key};
}

Mask make_relay_mask(const std::string& node, const DrawnKey& key_in,
                     const DrawnKey& key_out) {
    if (key_in.key.size() != key_out.key.size())
        throw ConfigError("make_relay_mask: length mismatch");
    return {node, key_in.id + "⊕" + key_out.id, key_in.key ^ key_out.key};
}

TracedValue central_combine(const std::vector<Mask>& masks, std::size_t expected) {
    if (masks.size() != expected)
        throw ProtocolError("central_combine: got " + std::to_string(masks.size()) +
                            " masks, expected " + std::to_string(expected));
    if (masks.empty())
        throw ProtocolError("central_combine: no masks");
    TracedValue out = masks[0].value;
    for (std::size_t i = 1; i < masks.size(); ++i)
        out = out ^ masks[i].value;
    return out;
}

BitString bob_recover(const BitString& combined, const BitString& last_link_key) {
    return combined ^ last_link_key;
}

CkmsOutcome centralized_send(Fabric& f, const std::string& alice, const std::string& bob,
                             const std::string& central, const TracedValue& secret,
                             const std::string& skip_mask_of) {
    if (!f.has_node(central))
        throw ProtocolError("central key manager missing: " + central);
    auto chain = find_disjoint_paths(f, alice, bob, 1, true).front();
    f.log(alice, EntryRole::Computed, "K_S", secret);

    // One key per chain link; both endpoints hold it from the draw.
    std::vector<DrawnKey> keys;
    for (std::size_t h = 0; h + 1 < chain.size(); ++h)
        keys.push_back(f.draw_key(chain[h], chain[h + 1], chain[h]));

    auto submit = [&](const Mask& m) {
        if (m.origin == skip_mask_of)
            return;
        f.log(m.origin, EntryRole::Computed, m.label, m.value);
        if (!f.find_cchannel(m.origin, central))
            throw ProtocolError("no channel from " + m.origin + " to " + central);
        f.send(m.origin, central, m.label, m.value);
    };

    std::size_t expected = chain.size() - 1; // alice plus every relay
    std::vector<Mask> received;
    Mask am = make_alice_mask(alice, secret, keys[0]);
    submit(am);
    if (am.origin != skip_mask_of)
        received.push_back(am);
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
        Mask rm = make_relay_mask(chain[i], keys[i - 1], keys[i]);
        submit(rm);
        if (rm.origin != skip_mask_of)
            received.push_back(rm);
    }

    TracedValue combined = central_combine(received, expected);
    f.log(central, EntryRole::Computed, "C", combined);
    if (!f.find_cchannel(central, bob))
        throw ProtocolError("no channel from " + central + " to " + bob);
    f.send(central, bob, "C", combined);

    TracedValue recovered = combined ^ keys.back().key;
    f.log(bob, EntryRole::Computed, "K_S", recovered);
    return {recovered.v, combined.v, std::move(chain)};
}

} // namespace qkdn
