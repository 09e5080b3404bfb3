#include "qkdn/symbolic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qkdn {

VarId SymTable::add_bit(const std::string& name, int true_bit) {
    vars_.push_back({name, VarKind::Bit, 2, static_cast<std::uint64_t>(true_bit & 1)});
    return static_cast<VarId>(vars_.size() - 1);
}

std::vector<VarId> SymTable::add_bits(const std::string& name, const BitString& true_value) {
    std::vector<VarId> ids;
    ids.reserve(true_value.size());
    for (std::size_t i = 0; i < true_value.size(); ++i)
        ids.push_back(add_bit(name + "[" + std::to_string(i) + "]", true_value.bit(i)));
    return ids;
}

VarId SymTable::add_field(const std::string& name, std::uint64_t q, std::uint64_t true_value) {
    if (true_value >= q)
        throw std::invalid_argument("SymTable::add_field: value out of domain");
    vars_.push_back({name, VarKind::Field, q, true_value});
    return static_cast<VarId>(vars_.size() - 1);
}

std::vector<std::uint64_t> SymTable::true_assignment() const {
    std::vector<std::uint64_t> a(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        a[i] = vars_[i].true_value;
    return a;
}

BitExpr BitExpr::of_const(int bit) {
    BitExpr e;
    e.constant = bit & 1;
    return e;
}

BitExpr BitExpr::of_var(VarId id) {
    BitExpr e;
    e.vars.push_back(id);
    return e;
}

BitExpr BitExpr::operator^(const BitExpr& other) const {
    BitExpr out;
    out.constant = constant ^ other.constant;
    // Symmetric difference of two sorted id lists.
    std::size_t i = 0, j = 0;
    while (i < vars.size() || j < other.vars.size()) {
        if (j == other.vars.size() || (i < vars.size() && vars[i] < other.vars[j]))
            out.vars.push_back(vars[i++]);
        else if (i == vars.size() || other.vars[j] < vars[i])
            out.vars.push_back(other.vars[j++]);
        else {
            ++i;
            ++j;
        }
    }
    return out;
}

int BitExpr::eval(const std::vector<std::uint64_t>& assign) const {
    int v = constant;
    for (VarId id : vars)
        v ^= static_cast<int>(assign[id] & 1);
    return v;
}

FieldExpr FieldExpr::of_const(std::uint64_t q, std::uint64_t c) {
    FieldExpr e;
    e.q = q;
    e.c0 = c % q;
    return e;
}

FieldExpr FieldExpr::of_var(std::uint64_t q, VarId id) {
    FieldExpr e;
    e.q = q;
    e.terms.push_back({id, 1});
    return e;
}

FieldExpr FieldExpr::add(const FieldExpr& other) const {
    if (q != other.q)
        throw std::invalid_argument("FieldExpr::add: modulus mismatch");
    FieldExpr out;
    out.q = q;
    out.c0 = (c0 + other.c0) % q;
    std::size_t i = 0, j = 0;
    while (i < terms.size() || j < other.terms.size()) {
        if (j == other.terms.size() ||
            (i < terms.size() && terms[i].var < other.terms[j].var))
            out.terms.push_back(terms[i++]);
        else if (i == terms.size() || other.terms[j].var < terms[i].var)
            out.terms.push_back(other.terms[j++]);
        else {
            std::uint64_t c = (terms[i].coeff + other.terms[j].coeff) % q;
            if (c != 0)
                out.terms.push_back({terms[i].var, c});
            ++i;
            ++j;
        }
    }
    return out;
}

FieldExpr FieldExpr::scale(std::uint64_t c) const {
    FieldExpr out;
    out.q = q;
    c %= q;
    out.c0 = c0 * c % q;
    for (const FieldTerm& t : terms) {
        std::uint64_t nc = t.coeff * c % q;
        if (nc != 0)
            out.terms.push_back({t.var, nc});
    }
    return out;
}

std::uint64_t FieldExpr::eval(const std::vector<std::uint64_t>& assign) const {
    std::uint64_t v = c0;
    for (const FieldTerm& t : terms)
        v = (v + t.coeff * (assign[t.var] % q)) % q;
    return v;
}

SymValue SymValue::constant(const BitString& v) {
    SymValue out;
    out.xors_.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.xors_.push_back(BitExpr::of_const(v.bit(i)));
    return out;
}

SymValue SymValue::of_vars(const std::vector<VarId>& ids) {
    SymValue out;
    out.xors_.reserve(ids.size());
    for (VarId id : ids)
        out.xors_.push_back(BitExpr::of_var(id));
    return out;
}

SymValue SymValue::of_bits(std::vector<BitExpr> bits) {
    SymValue out;
    out.xors_ = std::move(bits);
    return out;
}

SymValue SymValue::of_field(const FieldExpr& f) {
    SymValue out;
    out.xors_.assign(bits_for(f.q), BitExpr::of_const(0));
    out.fields_.push_back({0, f});
    out.normalize();
    return out;
}

void SymValue::normalize() {
    // Segments with no variables are constants; fold them into the bits.
    std::vector<FieldSegment> keep;
    for (FieldSegment& seg : fields_) {
        if (seg.expr.terms.empty()) {
            BitString enc = PrimeField(seg.expr.q).encode(seg.expr.c0);
            for (std::size_t i = 0; i < enc.size(); ++i)
                xors_[seg.offset + i] =
                    xors_[seg.offset + i] ^ BitExpr::of_const(enc.bit(i));
        } else {
            keep.push_back(std::move(seg));
        }
    }
    fields_ = std::move(keep);
}

SymValue SymValue::operator^(const SymValue& other) const {
    if (size() != other.size())
        throw std::invalid_argument("SymValue::operator^: length mismatch");
    SymValue out;
    out.xors_.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
        out.xors_.push_back(xors_[i] ^ other.xors_[i]);
    out.fields_ = fields_;
    for (const FieldSegment& seg : other.fields_) {
        for (const FieldSegment& mine : fields_)
            if (seg.offset < mine.offset + mine.width() &&
                mine.offset < seg.offset + seg.width())
                throw std::logic_error("SymValue::operator^: overlapping field segments");
        out.fields_.push_back(seg);
    }
    std::sort(out.fields_.begin(), out.fields_.end(),
              [](const FieldSegment& a, const FieldSegment& b) {
                  return a.offset < b.offset;
              });
    return out;
}

SymValue SymValue::concat(const SymValue& other) const {
    SymValue out;
    out.xors_ = xors_;
    out.xors_.insert(out.xors_.end(), other.xors_.begin(), other.xors_.end());
    out.fields_ = fields_;
    for (FieldSegment seg : other.fields_) {
        seg.offset += size();
        out.fields_.push_back(std::move(seg));
    }
    return out;
}

SymValue SymValue::slice(std::size_t from, std::size_t len) const {
    if (from + len > xors_.size())
        throw std::out_of_range("SymValue::slice: out of range");
    SymValue out;
    out.xors_.assign(xors_.begin() + static_cast<std::ptrdiff_t>(from),
                     xors_.begin() + static_cast<std::ptrdiff_t>(from + len));
    for (FieldSegment seg : fields_) {
        if (seg.offset + seg.width() <= from || seg.offset >= from + len)
            continue;
        if (seg.offset < from || seg.offset + seg.width() > from + len)
            throw std::logic_error("SymValue::slice: cuts through a field segment");
        seg.offset -= from;
        out.fields_.push_back(std::move(seg));
    }
    return out;
}

BitString SymValue::eval(const std::vector<std::uint64_t>& assign) const {
    BitString out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out.set_bit(i, xors_[i].eval(assign));
    for (const FieldSegment& seg : fields_) {
        BitString enc = PrimeField(seg.expr.q).encode(seg.expr.eval(assign));
        for (std::size_t i = 0; i < enc.size(); ++i)
            out.set_bit(seg.offset + i, out.bit(seg.offset + i) ^ enc.bit(i));
    }
    return out;
}

std::vector<VarId> SymValue::variables() const {
    std::set<VarId> ids;
    for (const BitExpr& e : xors_)
        ids.insert(e.vars.begin(), e.vars.end());
    for (const FieldSegment& seg : fields_)
        for (const FieldTerm& t : seg.expr.terms)
            ids.insert(t.var);
    return {ids.begin(), ids.end()};
}

TracedValue TracedValue::constant(const BitString& v) {
    return {v, SymValue::constant(v)};
}

TracedValue TracedValue::operator^(const TracedValue& other) const {
    return {v ^ other.v, s ^ other.s};
}

TracedValue TracedValue::concat(const TracedValue& other) const {
    return {v.concat(other.v), s.concat(other.s)};
}

TracedValue TracedValue::slice(std::size_t from, std::size_t len) const {
    return {v.slice(from, len), s.slice(from, len)};
}

} // namespace qkdn
