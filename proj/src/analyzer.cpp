#include "qkdn/analyzer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

namespace qkdn {

const char* trust_level_name(TrustLevel level) {
    switch (level) {
    case TrustLevel::NAT: return "NAT";
    case TrustLevel::PAT: return "PAT";
    case TrustLevel::FAT: return "FAT";
    }
    return "?";
}

std::uint64_t TargetSpec::prior_size() const {
    if (field_mode())
        return q;
    if (bits.size() >= 63)
        throw ConfigError("target too wide to enumerate");
    return std::uint64_t(1) << bits.size();
}

namespace {

// Incremental GF(2) row basis with word-packed coefficient vectors.
// Membership testing reduces a vector by the basis.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t ncols)
        : ncols_(ncols), words_((ncols + 63) / 64) {}

    static void flip(std::vector<std::uint64_t>& v, std::size_t col) {
        v[col / 64] ^= std::uint64_t(1) << (col % 64);
    }

    // Reduces (coeffs, rhs) in place; returns true when coeffs vanish.
    bool reduce(std::vector<std::uint64_t>& coeffs, int& rhs) const {
        for (const auto& row : rows_) {
            std::size_t p = row.pivot;
            if (coeffs[p / 64] >> (p % 64) & 1) {
                for (std::size_t w = 0; w < words_; ++w)
                    coeffs[w] ^= row.coeffs[w];
                rhs ^= row.rhs;
            }
        }
        return std::all_of(coeffs.begin(), coeffs.end(),
                           [](std::uint64_t w) { return w == 0; });
    }

    // Returns false if the row was already in the span (and must then be
    // consistent with it). Rank-only queries pass check_rhs = false; their
    // right-hand sides carry no meaning.
    bool add(std::vector<std::uint64_t> coeffs, int rhs, bool check_rhs = true) {
        if (reduce(coeffs, rhs)) {
            if (check_rhs && rhs != 0)
                throw std::logic_error("inconsistent linear view");
            return false;
        }
        std::size_t pivot = 0;
        for (std::size_t w = 0; w < words_; ++w)
            if (coeffs[w]) {
                pivot = w * 64 +
                        static_cast<std::size_t>(std::countr_zero(coeffs[w]));
                break;
            }
        rows_.push_back({std::move(coeffs), rhs, pivot});
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    std::size_t words() const { return words_; }

private:
    struct Row {
        std::vector<std::uint64_t> coeffs;
        int rhs;
        std::size_t pivot;
    };
    std::size_t ncols_;
    std::size_t words_;
    std::vector<Row> rows_;
};

std::vector<std::uint64_t> expr_coeffs(const BitExpr& e, std::size_t words) {
    std::vector<std::uint64_t> v(words, 0);
    for (VarId id : e.vars)
        Gf2Basis::flip(v, id);
    return v;
}

std::vector<const TranscriptEntry*> coalition_entries(const Fabric& f,
                                                      const std::vector<std::string>& members) {
    std::vector<const TranscriptEntry*> out;
    for (const std::string& m : members) {
        const Transcript& t = f.transcript(m);
        for (const TranscriptEntry& e : t.entries)
            out.push_back(&e);
    }
    return out;
}

// Rows of one pure value: coefficient vector and rhs per bit.
void value_rows(const SymValue& s, const BitString& observed, std::size_t words,
                std::vector<std::pair<std::vector<std::uint64_t>, int>>& rows) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const BitExpr& e = s.bits()[i];
        rows.emplace_back(expr_coeffs(e, words), observed.bit(i) ^ e.constant);
    }
}

} // namespace

LinearView build_linear_view(const Fabric& f, const std::vector<std::string>& members) {
    LinearView view;
    view.nvars = f.symbols().size();
    std::size_t words = (view.nvars + 63) / 64;
    std::vector<std::pair<std::vector<std::uint64_t>, int>> rows;
    for (const TranscriptEntry* e : coalition_entries(f, members)) {
        if (!e->sym.pure_bits())
            throw std::invalid_argument(
                "build_linear_view: transcript entry '" + e->label +
                "' is not linear over GF(2); use the enumeration engine");
        value_rows(e->sym, e->value, words, rows);
    }
    for (auto& [coeffs, rhs] : rows)
        view.rows.push_back({std::move(coeffs), rhs});
    return view;
}

SpanResult span_closure(const Fabric& f, const LinearView& view,
                        const std::vector<BitExpr>& targets) {
    std::size_t words = (view.nvars + 63) / 64;
    Gf2Basis basis(view.nvars);
    for (const auto& row : view.rows)
        basis.add(row.coeffs, row.rhs);

    auto truth = f.symbols().true_assignment();
    SpanResult out;
    out.determined.assign(targets.size(), false);
    out.deduced.assign(targets.size(), 0);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        std::vector<std::uint64_t> coeffs = expr_coeffs(targets[i], words);
        int rhs = 0;
        if (basis.reduce(coeffs, rhs)) {
            int value = rhs ^ targets[i].constant;
            if (value != targets[i].eval(truth))
                throw std::logic_error("span_closure deduced a wrong value");
            out.determined[i] = true;
            out.deduced[i] = value;
            ++out.determined_count;
        }
    }
    return out;
}

namespace {

struct LinearDecision {
    SpanResult span;
    bool uniform = false;
    bool material_dependent = false;
    std::optional<std::string> witness;
};

LinearDecision linear_decide(const Fabric& f, const std::vector<std::string>& members,
                             const AnalysisContext& ctx) {
    if (ctx.target.field_mode())
        throw std::invalid_argument("linear engine cannot handle a field-mode target");
    for (const SymValue& m : ctx.share_material)
        if (!m.pure_bits())
            throw std::invalid_argument(
                "linear engine cannot handle non-linear share material");

    LinearView view = build_linear_view(f, members);
    std::size_t words = (view.nvars + 63) / 64;

    LinearDecision d;
    d.span = span_closure(f, view, ctx.target.bits);

    Gf2Basis view_basis(view.nvars);
    for (const auto& row : view.rows)
        view_basis.add(row.coeffs, row.rhs);

    // Posterior uniformity: the view span must not contain any nonzero
    // functional of the secret, i.e. the spans intersect trivially.
    Gf2Basis target_basis(view.nvars);
    Gf2Basis joint(view.nvars);
    for (const auto& row : view.rows)
        joint.add(row.coeffs, row.rhs);
    std::size_t target_rank = 0, target_added = 0;
    for (const BitExpr& t : ctx.target.bits) {
        if (target_basis.add(expr_coeffs(t, words), 0, false))
            ++target_rank;
        if (joint.add(expr_coeffs(t, words), 0, false))
            ++target_added;
    }
    d.uniform = target_added == target_rank;

    // Dependence on share material, same rank argument.
    Gf2Basis material_basis(view.nvars);
    Gf2Basis joint_m(view.nvars);
    for (const auto& row : view.rows)
        joint_m.add(row.coeffs, row.rhs);
    std::size_t mat_rank = 0, mat_added = 0;
    std::vector<std::vector<std::uint64_t>> mat_rows;
    for (const SymValue& m : ctx.share_material)
        for (const BitExpr& e : m.bits()) {
            auto coeffs = expr_coeffs(e, words);
            if (material_basis.add(coeffs, 0, false)) {
                ++mat_rank;
                mat_rows.push_back(coeffs);
            }
            if (joint_m.add(expr_coeffs(e, words), 0, false))
                ++mat_added;
        }
    d.material_dependent = mat_added < mat_rank;

    if (d.material_dependent) {
        // Witness: the first entry whose own rows already overlap the
        // material span.
        for (const TranscriptEntry* e : coalition_entries(f, members)) {
            Gf2Basis ent(view.nvars);
            std::vector<std::pair<std::vector<std::uint64_t>, int>> rows;
            value_rows(e->sym, e->value, words, rows);
            std::size_t er = 0;
            for (auto& [c, r] : rows)
                if (ent.add(c, r, false)) ++er;
            Gf2Basis both(view.nvars);
            for (const auto& c : mat_rows) both.add(c, 0, false);
            std::size_t added = 0;
            for (auto& [c, r] : rows)
                if (both.add(c, 0, false)) ++added;
            if (added < er) {
                d.witness = e->label;
                break;
            }
        }
    }
    return d;
}

struct EnumSetup {
    std::vector<VarId> enumerated;       // mixed-radix enumerated variables
    std::vector<std::uint64_t> domains;  // matching domains
    // Fully reduced rows for bound bit variables: pivot var, support vars
    // (free), rhs.
    struct BoundRow {
        VarId pivot;
        std::vector<VarId> support;
        int rhs;
    };
    std::vector<BoundRow> bound;
    std::vector<const TranscriptEntry*> filters; // entries checked per state
    std::uint64_t states = 1;
};

void collect_vars(const SymValue& s, std::set<VarId>& into) {
    for (VarId id : s.variables())
        into.insert(id);
}

EnumSetup enum_setup(const Fabric& f, const std::vector<std::string>& members,
                     const AnalysisContext& ctx, EnumMode mode) {
    const SymTable& tab = f.symbols();
    auto entries = coalition_entries(f, members);

    std::set<VarId> relevant;
    if (mode == EnumMode::Raw) {
        for (VarId id = 0; id < tab.size(); ++id)
            relevant.insert(id);
    } else {
        for (const TranscriptEntry* e : entries)
            collect_vars(e->sym, relevant);
        for (const BitExpr& b : ctx.target.bits)
            relevant.insert(b.vars.begin(), b.vars.end());
        if (ctx.target.field_var)
            relevant.insert(*ctx.target.field_var);
        for (const SymValue& m : ctx.share_material)
            collect_vars(m, relevant);
    }

    EnumSetup setup;
    std::set<VarId> bound_vars;
    if (mode == EnumMode::Presolve) {
        // Fully reduce the pure-bit part of the view so bound bit variables
        // are computed instead of enumerated.
        std::vector<VarId> bit_vars;
        for (VarId id : relevant)
            if (tab.info(id).kind == VarKind::Bit)
                bit_vars.push_back(id);
        std::map<VarId, std::size_t> col;
        for (std::size_t i = 0; i < bit_vars.size(); ++i)
            col[bit_vars[i]] = i;

        struct Row {
            std::vector<std::uint64_t> coeffs;
            int rhs;
        };
        std::size_t words = (bit_vars.size() + 63) / 64;
        std::vector<Row> rref;
        auto row_of = [&](const BitExpr& e, int observed) {
            Row r{std::vector<std::uint64_t>(words, 0), observed ^ e.constant};
            for (VarId id : e.vars)
                Gf2Basis::flip(r.coeffs, col.at(id));
            return r;
        };
        auto first_col = [&](const Row& r) -> std::ptrdiff_t {
            for (std::size_t w = 0; w < words; ++w)
                if (r.coeffs[w])
                    return static_cast<std::ptrdiff_t>(
                        w * 64 + static_cast<std::size_t>(std::countr_zero(r.coeffs[w])));
            return -1;
        };
        auto insert_row = [&](Row r) {
            for (const Row& b : rref) {
                std::ptrdiff_t p = first_col(b);
                if (r.coeffs[static_cast<std::size_t>(p) / 64] >>
                        (static_cast<std::size_t>(p) % 64) & 1) {
                    for (std::size_t w = 0; w < words; ++w)
                        r.coeffs[w] ^= b.coeffs[w];
                    r.rhs ^= b.rhs;
                }
            }
            std::ptrdiff_t p = first_col(r);
            if (p < 0) {
                if (r.rhs != 0)
                    throw std::logic_error("inconsistent transcript in presolve");
                return;
            }
            for (Row& b : rref)
                if (b.coeffs[static_cast<std::size_t>(p) / 64] >>
                        (static_cast<std::size_t>(p) % 64) & 1) {
                    for (std::size_t w = 0; w < words; ++w)
                        b.coeffs[w] ^= r.coeffs[w];
                    b.rhs ^= r.rhs;
                }
            rref.push_back(std::move(r));
        };
        for (const TranscriptEntry* e : entries) {
            if (!e->sym.pure_bits()) {
                setup.filters.push_back(e);
                continue;
            }
            for (std::size_t i = 0; i < e->sym.size(); ++i)
                insert_row(row_of(e->sym.bits()[i], e->value.bit(i)));
        }
        for (const Row& r : rref) {
            EnumSetup::BoundRow br;
            std::ptrdiff_t p = first_col(r);
            br.pivot = bit_vars[static_cast<std::size_t>(p)];
            br.rhs = r.rhs;
            for (std::size_t i = 0; i < bit_vars.size(); ++i)
                if (static_cast<std::ptrdiff_t>(i) != p &&
                    (r.coeffs[i / 64] >> (i % 64) & 1))
                    br.support.push_back(bit_vars[i]);
            bound_vars.insert(br.pivot);
            setup.bound.push_back(std::move(br));
        }
    } else {
        setup.filters = entries;
    }

    for (VarId id : relevant) {
        if (bound_vars.count(id))
            continue;
        setup.enumerated.push_back(id);
        std::uint64_t dom = tab.info(id).domain;
        setup.domains.push_back(dom);
        if (setup.states > kEnumStateCap / dom)
            throw ConfigError("enumeration domain exceeds the state cap");
        setup.states *= dom;
    }
    return setup;
}

double entropy_of(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& counts,
                  std::uint64_t total) {
    double h = 0.0;
    for (const auto& kv : counts) {
        double p = static_cast<double>(kv.second) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace

PosteriorResult posterior_entropy(const Fabric& f, const std::vector<std::string>& members,
                                  const AnalysisContext& ctx, EnumMode mode) {
    const SymTable& tab = f.symbols();
    EnumSetup setup = enum_setup(f, members, ctx, mode);

    std::vector<std::uint64_t> assign(tab.size(), 0);
    std::vector<std::uint64_t> counter(setup.enumerated.size(), 0);
    std::map<std::uint64_t, std::uint64_t> target_counts;
    std::map<std::vector<std::uint64_t>, std::uint64_t> tuple_counts;
    std::uint64_t total = 0;
    std::size_t width = ctx.target.field_mode() ? 0 : ctx.target.bits.size();
    std::vector<int> seen0(width, 0), seen1(width, 0);

    for (std::uint64_t s = 0; s < setup.states; ++s) {
        for (std::size_t i = 0; i < setup.enumerated.size(); ++i)
            assign[setup.enumerated[i]] = counter[i];
        for (const auto& br : setup.bound) {
            std::uint64_t v = static_cast<std::uint64_t>(br.rhs);
            for (VarId id : br.support)
                v ^= assign[id] & 1;
            assign[br.pivot] = v;
        }
        bool ok = true;
        for (const TranscriptEntry* e : setup.filters)
            if (e->sym.eval(assign) != e->value) {
                ok = false;
                break;
            }
        if (ok) {
            ++total;
            std::uint64_t tv = 0;
            if (ctx.target.field_mode()) {
                tv = assign[*ctx.target.field_var];
            } else {
                for (std::size_t i = 0; i < ctx.target.bits.size(); ++i) {
                    int b = ctx.target.bits[i].eval(assign);
                    tv = (tv << 1) | static_cast<std::uint64_t>(b);
                    (b ? seen1 : seen0)[i] = 1;
                }
            }
            ++target_counts[tv];
            if (!ctx.share_material.empty()) {
                std::vector<std::uint64_t> tuple;
                tuple.reserve(ctx.share_material.size());
                for (const SymValue& m : ctx.share_material)
                    tuple.push_back(m.eval(assign).as_uint64());
                ++tuple_counts[tuple];
            }
        }
        // Mixed-radix increment.
        for (std::size_t i = 0; i < setup.enumerated.size(); ++i) {
            if (++counter[i] < setup.domains[i])
                break;
            counter[i] = 0;
        }
    }
    if (total == 0)
        throw std::logic_error("posterior_entropy: no consistent assignment");

    PosteriorResult out;
    out.states = total;
    out.counts.assign(target_counts.begin(), target_counts.end());
    out.entropy_bits = entropy_of(out.counts, total);
    out.determined = out.counts.size() == 1;
    if (ctx.target.field_mode()) {
        out.determined_bits = out.determined ? ctx.target.width() : 0;
    } else {
        for (std::size_t i = 0; i < width; ++i)
            if (!(seen0[i] && seen1[i]))
                ++out.determined_bits;
    }
    bool all_equal = true;
    for (const auto& kv : out.counts)
        all_equal = all_equal && kv.second == out.counts.front().second;
    out.uniform_over_prior =
        all_equal && out.counts.size() == ctx.target.prior_size();

    if (!ctx.share_material.empty()) {
        // Prior distribution of the share-material tuple over its own
        // variables, compared exactly by cross-multiplication.
        std::set<VarId> mat_vars;
        for (const SymValue& m : ctx.share_material)
            collect_vars(m, mat_vars);
        std::vector<VarId> mvars(mat_vars.begin(), mat_vars.end());
        std::uint64_t prior_states = 1;
        for (VarId id : mvars) {
            std::uint64_t dom = tab.info(id).domain;
            if (prior_states > kEnumStateCap / dom)
                throw ConfigError("enumeration domain exceeds the state cap");
            prior_states *= dom;
        }
        std::map<std::vector<std::uint64_t>, std::uint64_t> prior_counts;
        std::vector<std::uint64_t> passign(tab.size(), 0);
        std::vector<std::uint64_t> pcounter(mvars.size(), 0);
        for (std::uint64_t s = 0; s < prior_states; ++s) {
            for (std::size_t i = 0; i < mvars.size(); ++i)
                passign[mvars[i]] = pcounter[i];
            std::vector<std::uint64_t> tuple;
            tuple.reserve(ctx.share_material.size());
            for (const SymValue& m : ctx.share_material)
                tuple.push_back(m.eval(passign).as_uint64());
            ++prior_counts[tuple];
            for (std::size_t i = 0; i < mvars.size(); ++i) {
                if (++pcounter[i] < tab.info(mvars[i]).domain)
                    break;
                pcounter[i] = 0;
            }
        }
        for (const auto& [tuple, post_c] : tuple_counts) {
            auto it = prior_counts.find(tuple);
            std::uint64_t prior_c = it == prior_counts.end() ? 0 : it->second;
            if (post_c * prior_states != prior_c * total) {
                out.material_dependent = true;
                break;
            }
        }
        if (!out.material_dependent)
            for (const auto& [tuple, prior_c] : prior_counts)
                if (!tuple_counts.count(tuple) && prior_c != 0) {
                    out.material_dependent = true;
                    break;
                }
    }
    return out;
}

namespace {

bool all_pure(const Fabric& f, const std::vector<std::string>& members,
              const AnalysisContext& ctx) {
    if (ctx.target.field_mode())
        return false;
    for (const SymValue& m : ctx.share_material)
        if (!m.pure_bits())
            return false;
    for (const TranscriptEntry* e : coalition_entries(f, members))
        if (!e->sym.pure_bits())
            return false;
    return true;
}

std::optional<std::string> enum_witness(const Fabric& f,
                                        const std::vector<std::string>& members,
                                        const AnalysisContext& ctx) {
    std::set<VarId> mat_vars;
    for (const SymValue& m : ctx.share_material)
        collect_vars(m, mat_vars);
    for (const TranscriptEntry* e : coalition_entries(f, members))
        for (VarId id : e->sym.variables())
            if (mat_vars.count(id))
                return e->label;
    return std::nullopt;
}

} // namespace

TrustVerdict classify(const Fabric& f, const std::vector<std::string>& members,
                      const AnalysisContext& ctx, Engine engine, EnumMode mode) {
    for (const std::string& m : members)
        f.transcript(m); // validates membership
    bool pure = all_pure(f, members, ctx);
    if (engine == Engine::Auto)
        engine = pure ? Engine::Linear : Engine::Enumeration;

    TrustVerdict v;
    if (engine == Engine::Linear) {
        LinearDecision d = linear_decide(f, members, ctx);
        v.engine = "linear";
        v.determined_bits = d.span.determined_count;
        v.correlation_witness = d.witness;
        if (d.span.determined_count == ctx.target.bits.size() &&
            !ctx.target.bits.empty())
            v.level = TrustLevel::FAT;
        else if (d.uniform && !d.material_dependent)
            v.level = TrustLevel::NAT;
        else
            v.level = TrustLevel::PAT;
        return v;
    }

    PosteriorResult p = posterior_entropy(f, members, ctx, mode);
    v.engine = "enumeration";
    v.determined_bits = p.determined_bits;
    v.posterior_entropy_bits = p.entropy_bits;
    if (p.material_dependent)
        v.correlation_witness = enum_witness(f, members, ctx);
    if (p.determined)
        v.level = TrustLevel::FAT;
    else if (p.uniform_over_prior && !p.material_dependent)
        v.level = TrustLevel::NAT;
    else
        v.level = TrustLevel::PAT;
    return v;
}

TrustVerdict classify_node(const Fabric& f, const std::string& node,
                           const AnalysisContext& ctx, Engine engine) {
    return classify(f, {node}, ctx, engine);
}

TrustVerdict classify_coalition(const Fabric& f, const std::vector<std::string>& members,
                                const AnalysisContext& ctx, Engine engine) {
    return classify(f, members, ctx, engine);
}

} // namespace qkdn
