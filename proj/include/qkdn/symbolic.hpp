#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkdn/bitstring.hpp"
#include "qkdn/field.hpp"

namespace qkdn {

// Primitive unknowns of a run: individual bits (secret bits, link-key bits,
// fragment bits, party randomness) and small-field elements (polynomial
// coefficients, field-mode secrets). The table also records each variable's
// concrete value in the run, so symbolic bookkeeping can be audited against
// the wire at every log call.
using VarId = std::uint32_t;

enum class VarKind { Bit, Field };

struct VarInfo {
    std::string name;
    VarKind kind = VarKind::Bit;
    std::uint64_t domain = 2; // 2 for bits, q for field elements
    std::uint64_t true_value = 0;
};

class SymTable {
public:
    VarId add_bit(const std::string& name, int true_bit);
    std::vector<VarId> add_bits(const std::string& name, const BitString& true_value);
    VarId add_field(const std::string& name, std::uint64_t q, std::uint64_t true_value);

    const VarInfo& info(VarId id) const { return vars_.at(id); }
    std::size_t size() const { return vars_.size(); }

    std::vector<std::uint64_t> true_assignment() const;

private:
    std::vector<VarInfo> vars_;
};

// XOR of a set of bit variables plus a constant. Variable ids are kept
// sorted and duplicate-free (x ^ x cancels).
struct BitExpr {
    std::vector<VarId> vars;
    int constant = 0;

    static BitExpr of_const(int bit);
    static BitExpr of_var(VarId id);

    BitExpr operator^(const BitExpr& other) const;
    bool is_const() const { return vars.empty(); }
    int eval(const std::vector<std::uint64_t>& assign) const;
    bool operator==(const BitExpr&) const = default;
};

// c0 + sum(coeff * var) mod q; variables may be bits (contributing 0/1)
// or field elements.
struct FieldTerm {
    VarId var;
    std::uint64_t coeff;
    bool operator==(const FieldTerm&) const = default;
};

struct FieldExpr {
    std::uint64_t q = 0;
    std::uint64_t c0 = 0;
    std::vector<FieldTerm> terms; // sorted by var, coefficients nonzero

    static FieldExpr of_const(std::uint64_t q, std::uint64_t c);
    static FieldExpr of_var(std::uint64_t q, VarId id);

    FieldExpr add(const FieldExpr& other) const;
    FieldExpr scale(std::uint64_t c) const;
    std::uint64_t eval(const std::vector<std::uint64_t>& assign) const;
    bool operator==(const FieldExpr&) const = default;
};

// A field element occupying bits [offset, offset + bits_for(expr.q)) of a
// value as its fixed-width encoding.
struct FieldSegment {
    std::size_t offset = 0;
    FieldExpr expr;

    std::size_t width() const { return bits_for(expr.q); }
    bool operator==(const FieldSegment&) const = default;
};

// Symbolic form of a protocol value: non-overlapping encoded field segments
// XORed with a per-bit GF(2) part. Values with no segments are fully linear
// over GF(2).
class SymValue {
public:
    SymValue() = default;

    static SymValue constant(const BitString& v);
    static SymValue of_vars(const std::vector<VarId>& ids);
    static SymValue of_bits(std::vector<BitExpr> bits);
    static SymValue of_field(const FieldExpr& f);

    std::size_t size() const { return xors_.size(); }
    bool pure_bits() const { return fields_.empty(); }
    const std::vector<BitExpr>& bits() const { return xors_; }
    const std::vector<FieldSegment>& fields() const { return fields_; }

    SymValue operator^(const SymValue& other) const;
    SymValue concat(const SymValue& other) const;
    SymValue slice(std::size_t from, std::size_t len) const;

    BitString eval(const std::vector<std::uint64_t>& assign) const;

    // Ids of every variable the value mentions.
    std::vector<VarId> variables() const;

private:
    std::vector<BitExpr> xors_;
    std::vector<FieldSegment> fields_; // sorted by offset, non-overlapping
    void normalize();
};

// A concrete value paired with its symbolic form; all protocol arithmetic
// goes through this type so the two can never drift apart.
struct TracedValue {
    BitString v;
    SymValue s;

    static TracedValue constant(const BitString& v);

    TracedValue operator^(const TracedValue& other) const;
    TracedValue concat(const TracedValue& other) const;
    TracedValue slice(std::size_t from, std::size_t len) const;
    std::size_t size() const { return v.size(); }
};

} // namespace qkdn
