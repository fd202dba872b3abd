#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "penc/errors.hpp"
#include "penc/wideint.hpp"

namespace penc {

// Residue class [[a]]_b: all integers a + b*k. Its representatives are
// closed under sums of l*(m-1)+1 terms and products of l*(n-1)+1 factors,
// where the arities m and n are determined by (a, b) alone.

struct PolyadicInt;

struct CongruenceClass {
    std::int64_t a;
    std::int64_t b;

    CongruenceClass(std::int64_t a_, std::int64_t b_) : a(a_), b(b_) {
        if (b < 1)
            throw ParameterError("congruence class needs modulus b >= 1");
        if (a < 0 || a > b - 1)
            throw ParameterError("congruence class needs 0 <= a <= b-1");
    }

    bool operator==(const CongruenceClass&) const = default;

    bool contains(Int v) const { return math_mod(v, b) == a; }

    PolyadicInt element(Int k) const;
};

// A representative a + b*k, identified by its index k.
struct PolyadicInt {
    CongruenceClass cls;
    Int k;

    Int value() const { return checked_add(cls.a, checked_mul(cls.b, k)); }
};

inline PolyadicInt CongruenceClass::element(Int k) const {
    return PolyadicInt{*this, k};
}

inline PolyadicInt from_value(Int v, const CongruenceClass& cls) {
    if (!cls.contains(v)) {
        std::ostringstream os;
        os << to_string(v) << " is not in class [[" << cls.a << "]]_" << cls.b
           << " (residue " << to_string(math_mod(v, cls.b)) << ")";
        throw MembershipError(os.str());
    }
    return PolyadicInt{cls, (v - cls.a) / cls.b};
}

// Minimal m >= 2 with b | (m-1)*a. Closed form: m = b/gcd(a,b) + 1,
// which also covers a = 0 (gcd(0,b) = b, so m = 2).
inline std::int64_t additive_arity(const CongruenceClass& cls) {
    std::int64_t step = cls.b / std::gcd(cls.a, cls.b);
    if (step == std::numeric_limits<std::int64_t>::max())
        throw OverflowError("additive arity exceeds 64-bit range");
    return step + 1;
}

// Minimal n in [2, b+1] with b | (a^n - a), or absent if none exists.
// The power sequence a^n mod b is eventually periodic with period <= b,
// so a recurrence of a, if any, shows up within n <= b + 1.
inline std::optional<std::int64_t> mult_arity(const CongruenceClass& cls) {
    Int cur = math_mod(cls.a, cls.b);
    for (std::uint64_t step = 0; step < static_cast<std::uint64_t>(cls.b); ++step) {
        cur = math_mod(cur * cls.a, cls.b);
        if (cur == cls.a) {
            if (step + 2 > static_cast<std::uint64_t>(
                               std::numeric_limits<std::int64_t>::max()))
                throw OverflowError("multiplicative arity exceeds 64-bit range");
            return static_cast<std::int64_t>(step + 2);
        }
    }
    return std::nullopt;
}

// The arities of a class together with the integer certificates
// I = (m-1)a/b and J = (a^n - a)/b of the closure conditions.
struct ArityShape {
    std::int64_t m;
    std::optional<std::int64_t> n;
    std::int64_t I;
    std::optional<Int> J;

    bool operator==(const ArityShape&) const = default;
};

inline ArityShape arity_shape(const CongruenceClass& cls) {
    ArityShape s{additive_arity(cls), mult_arity(cls), 0, std::nullopt};
    Int inum = checked_mul(s.m - 1, cls.a);
    if (math_mod(inum, cls.b) != 0)
        throw Error("additive shape invariant is not integral");
    s.I = static_cast<std::int64_t>(inum / cls.b);
    if (s.n) {
        Int jnum = checked_sub(checked_pow(cls.a, *s.n), cls.a);
        if (math_mod(jnum, cls.b) != 0)
            throw Error("multiplicative shape invariant is not integral");
        s.J = jnum / cls.b;
    }
    return s;
}

namespace detail {

inline void check_admissible(std::size_t got, std::int64_t power,
                             std::int64_t arity, const char* op) {
    if (power < 1)
        throw ParameterError("polyadic power must be >= 1");
    Int want = checked_add(checked_mul(power, arity - 1), 1);
    if (static_cast<Int>(got) != want) {
        std::ostringstream os;
        os << op << " with power " << power << " needs exactly "
           << to_string(want) << " operands, got " << got;
        throw AdmissibilityError(os.str());
    }
}

inline void check_same_class(std::span<const PolyadicInt> elems,
                             const CongruenceClass& cls) {
    for (const auto& e : elems)
        if (!(e.cls == cls))
            throw MembershipError("operand from a different congruence class");
}

} // namespace detail

// m-admissible sum of power*(m-1)+1 representatives; result stays in the class.
inline PolyadicInt madd(const CongruenceClass& cls,
                        std::span<const PolyadicInt> elems, std::int64_t power) {
    detail::check_admissible(elems.size(), power, additive_arity(cls), "madd");
    detail::check_same_class(elems, cls);
    Int sum = 0;
    for (const auto& e : elems)
        sum = checked_add(sum, e.value());
    return from_value(sum, cls);
}

// n-admissible product of power*(n-1)+1 representatives.
inline PolyadicInt nmul(const CongruenceClass& cls,
                        std::span<const PolyadicInt> elems, std::int64_t power) {
    auto n = mult_arity(cls);
    if (!n) {
        std::ostringstream os;
        os << "class [[" << cls.a << "]]_" << cls.b
           << " has no multiplicative arity (no ring)";
        throw NoRingError(os.str());
    }
    detail::check_admissible(elems.size(), power, *n, "nmul");
    detail::check_same_class(elems, cls);
    Int prod = 1;
    for (const auto& e : elems)
        prod = checked_mul(prod, e.value());
    return from_value(prod, cls);
}

} // namespace penc
