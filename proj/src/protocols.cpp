#include "qkdn/protocols.hpp"

#include <algorithm>
#include <bit>

#include "qkdn/paths.hpp"

namespace qkdn {

BitString fat_relay_payload(const BitString& inbound, const BitString& key_in,
                            const BitString& key_out) {
    return inbound ^ key_in ^ key_out;
}

TracedValue forward_along_path(Fabric& f, const std::vector<std::string>& path,
                               const std::string& label, const TracedValue& value,
                               std::optional<std::uint64_t> share_index) {
    if (path.size() < 2)
        throw ConfigError("forward_along_path: path needs at least two nodes");
    TracedValue cur = value;
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        const std::string& a = path[h];
        const std::string& b = path[h + 1];
        if (f.find_qlink(a, b)) {
            DrawnKey key = f.draw_key(a, b, a);
            if (key.key.size() != cur.size())
                throw ConfigError("link key length " + std::to_string(key.key.size()) +
                                  " does not match payload length " +
                                  std::to_string(cur.size()) + " on " + a + "-" + b);
            TracedValue cipher = cur ^ key.key;
            f.send(a, b, label + "⊕" + key.id, cipher, share_index);
            cur = cipher ^ key.key;
            f.log(b, EntryRole::Computed, label, cur);
        } else {
            const ClassicalChannel* c = f.find_cchannel(a, b);
            if (!c || !c->secure)
                throw ProtocolError("no quantum link or secure channel between " + a +
                                    " and " + b);
            f.send(a, b, label, cur, share_index);
        }
    }
    return cur;
}

FatOutcome fat_send(Fabric& f, const std::string& alice, const std::string& bob,
                    const TracedValue& secret) {
    auto chain = find_disjoint_paths(f, alice, bob, 1, true).front();
    f.log(alice, EntryRole::Computed, "K_S", secret);
    TracedValue delivered = forward_along_path(f, chain, "K_S", secret);
    return {delivered.v, std::move(chain)};
}

namespace {

struct Chunk {
    FieldExpr secret_expr;
    std::uint64_t secret_value = 0;
    std::size_t bit_offset = 0; // position in the secret (bit mode)
};

std::vector<Chunk> make_chunks(const TracedValue& secret, const MultipathScheme& scheme) {
    std::vector<Chunk> chunks;
    if (scheme.field_mode) {
        const auto& fields = secret.s.fields();
        if (fields.size() != 1 || fields[0].offset != 0 ||
            fields[0].width() != secret.size())
            throw std::logic_error("field-mode secret must be a single field element");
        chunks.push_back({fields[0].expr, PrimeField(scheme.q).decode(secret.v), 0});
        return chunks;
    }
    const std::size_t w = static_cast<std::size_t>(std::bit_width(scheme.q)) - 1;
    if (secret.size() == 0 || secret.size() % w != 0)
        throw ConfigError("secret length " + std::to_string(secret.size()) +
                          " is not a multiple of the chunk width " + std::to_string(w) +
                          " for q=" + std::to_string(scheme.q));
    for (std::size_t off = 0; off < secret.size(); off += w) {
        Chunk c;
        c.bit_offset = off;
        c.secret_value = secret.v.slice(off, w).as_uint64();
        c.secret_expr = FieldExpr::of_const(scheme.q, 0);
        for (std::size_t j = 0; j < w; ++j) {
            const BitExpr& bit = secret.s.bits()[off + j];
            if (bit.vars.size() != 1 || bit.constant != 0)
                throw std::logic_error("chunked secret bits must be primitive variables");
            std::uint64_t coeff = (std::uint64_t(1) << (w - 1 - j)) % scheme.q;
            c.secret_expr = c.secret_expr.add(
                FieldExpr::of_var(scheme.q, bit.vars[0]).scale(coeff));
        }
        chunks.push_back(std::move(c));
    }
    return chunks;
}

MultipathOutcome multipath_xor(Fabric& f, const std::string& alice, const std::string& bob,
                               const TracedValue& secret, const MultipathScheme& scheme,
                               const std::vector<std::vector<std::string>>& paths, Rng& rng,
                               const MultipathTestForce* force) {
    std::vector<BitString> head;
    if (force && !force->xor_head.empty())
        head = force->xor_head;
    else
        for (unsigned i = 0; i + 1 < scheme.k; ++i)
            head.push_back(rng.bits(secret.size()));
    std::vector<BitString> frag_values = xor_split_from(secret.v, head);

    std::vector<TracedValue> fragments;
    TracedValue fold = secret;
    for (unsigned i = 0; i + 1 < scheme.k; ++i) {
        std::string name = "K_S" + std::to_string(i + 1);
        TracedValue frag{frag_values[i],
                         SymValue::of_vars(f.symbols().add_bits(name, frag_values[i]))};
        fragments.push_back(frag);
        fold = fold ^ frag;
    }
    fragments.push_back(fold); // last fragment closes the XOR
    f.log(alice, EntryRole::Computed, "K_S", secret);

    MultipathOutcome out;
    std::vector<TracedValue> delivered;
    for (unsigned i = 0; i < scheme.k; ++i) {
        std::string label = "K_S" + std::to_string(i + 1);
        f.log(alice, EntryRole::Computed, label, fragments[i]);
        out.share_material.push_back(fragments[i].s);
        delivered.push_back(forward_along_path(f, paths[i], label, fragments[i], i + 1));
    }
    out.paths_delivered = scheme.k;

    TracedValue combined = delivered[0];
    for (unsigned i = 1; i < scheme.k; ++i)
        combined = combined ^ delivered[i];
    f.log(bob, EntryRole::Computed, "K_S", combined);
    out.delivered = combined.v;
    return out;
}

MultipathOutcome multipath_shamir(Fabric& f, const std::string& alice,
                                  const std::string& bob, const TracedValue& secret,
                                  const MultipathScheme& scheme,
                                  const std::vector<std::vector<std::string>>& paths,
                                  Rng& rng, const MultipathTestForce* force) {
    PrimeField F(scheme.q);
    std::vector<Chunk> chunks = make_chunks(secret, scheme);
    f.log(alice, EntryRole::Computed, "K_S", secret);

    // One polynomial per chunk; coefficients are fresh field unknowns.
    std::vector<std::vector<FieldExpr>> share_exprs(chunks.size());
    std::vector<std::vector<std::uint64_t>> share_values(chunks.size());
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        Polynomial poly;
        if (force && !force->polys.empty())
            poly = force->polys.at(c);
        else
            poly = shamir_polynomial(chunks[c].secret_value, scheme.t, scheme.q, rng);
        std::vector<VarId> coeff_vars;
        for (unsigned m = 1; m < scheme.t; ++m)
            coeff_vars.push_back(f.symbols().add_field(
                "a[" + std::to_string(c) + "][" + std::to_string(m) + "]", scheme.q,
                poly.coeffs[m]));
        for (unsigned i = 1; i <= scheme.k; ++i) {
            FieldExpr e = chunks[c].secret_expr;
            std::uint64_t x = 1;
            for (unsigned m = 1; m < scheme.t; ++m) {
                x = F.mul(x, i);
                e = e.add(FieldExpr::of_var(scheme.q, coeff_vars[m - 1]).scale(x));
            }
            share_exprs[c].push_back(e);
            share_values[c].push_back(poly.eval(i));
        }
    }

    MultipathOutcome out;
    std::vector<std::optional<TracedValue>> delivered(scheme.k);
    std::optional<ProtocolError> path_failure;
    for (unsigned i = 0; i < scheme.k; ++i) {
        TracedValue payload;
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            TracedValue enc{F.encode(share_values[c][i]),
                            SymValue::of_field(share_exprs[c][i])};
            payload = c == 0 ? enc : payload.concat(enc);
        }
        std::string label = "K_S" + std::to_string(i + 1);
        f.log(alice, EntryRole::Computed, label, payload);
        out.share_material.push_back(payload.s);
        try {
            delivered[i] = forward_along_path(f, paths[i], label, payload, i + 1);
            ++out.paths_delivered;
        } catch (const ProtocolError& e) {
            path_failure = e; // tolerated while at least t paths deliver
        }
    }
    if (out.paths_delivered < scheme.t)
        throw path_failure ? *path_failure
                           : ProtocolError("fewer shares delivered than the threshold");

    // Bob interpolates each chunk from the t lowest-indexed delivered shares.
    const std::size_t enc_w = bits_for(scheme.q);
    BitString recovered;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        std::vector<Share> got;
        for (unsigned i = 0; i < scheme.k && got.size() < scheme.t; ++i) {
            if (!delivered[i])
                continue;
            Share s;
            s.scheme = ShareScheme::Shamir;
            s.index = i + 1;
            s.modulus = scheme.q;
            s.value = F.decode(delivered[i]->v.slice(c * enc_w, enc_w));
            got.push_back(s);
        }
        std::uint64_t value = shamir_reconstruct(got, scheme.t);
        std::size_t w = scheme.field_mode
                            ? enc_w
                            : static_cast<std::size_t>(std::bit_width(scheme.q)) - 1;
        recovered = recovered.concat(BitString::from_uint(value, w));
    }
    // Interpolation over the share forms cancels every coefficient exactly,
    // so the recovered value's functional form is the secret's own; logging
    // it that way is audited against the wire like every entry.
    f.log(bob, EntryRole::Computed, "K_S", {recovered, secret.s});
    out.delivered = recovered;
    return out;
}

} // namespace

MultipathOutcome pat_multipath_send(Fabric& f, const std::string& alice,
                                    const std::string& bob, const TracedValue& secret,
                                    const MultipathScheme& scheme,
                                    const std::vector<std::vector<std::string>>& paths,
                                    Rng& rng, const MultipathTestForce* force) {
    if (paths.size() != scheme.k)
        throw ConfigError("pat_multipath_send: got " + std::to_string(paths.size()) +
                          " paths for k=" + std::to_string(scheme.k));
    if (scheme.kind == MultipathScheme::Kind::Xor) {
        if (scheme.k < 2)
            throw ConfigError("pat_multipath_send: xor needs k >= 2");
        return multipath_xor(f, alice, bob, secret, scheme, paths, rng, force);
    }
    if (scheme.t < 1 || scheme.t > scheme.k || !is_prime(scheme.q) || scheme.k >= scheme.q)
        throw ConfigError("pat_multipath_send: bad shamir parameters");
    return multipath_shamir(f, alice, bob, secret, scheme, paths, rng, force);
}

} // namespace qkdn
