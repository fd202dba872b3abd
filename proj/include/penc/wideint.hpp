#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "penc/errors.hpp"

namespace penc {

// All exact ring arithmetic runs on 128-bit signed integers. Overflow is
// detected and reported, never wrapped.
using Int = __int128;
using UInt = unsigned __int128;

constexpr Int int_max() {
    return static_cast<Int>((UInt(1) << 127) - 1);
}

constexpr Int int_min() {
    return -int_max() - 1;
}

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("128-bit overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError("128-bit overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("128-bit overflow in multiplication");
    return r;
}

inline Int checked_pow(Int base, std::int64_t exp) {
    Int r = 1;
    for (std::int64_t i = 0; i < exp; ++i)
        r = checked_mul(r, base);
    return r;
}

// Mathematical remainder, in [0, m) for m >= 1.
inline Int math_mod(Int v, Int m) {
    Int r = v % m;
    return r < 0 ? r + m : r;
}

inline bool fits_int64(Int v) {
    return v >= std::numeric_limits<std::int64_t>::min() &&
           v <= std::numeric_limits<std::int64_t>::max();
}

inline std::string to_string(Int v) {
    if (v == 0)
        return "0";
    UInt u = v < 0 ? UInt(0) - UInt(v) : UInt(v);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<unsigned>(u % 10)));
        u /= 10;
    }
    if (v < 0)
        digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
}

// Floor square root of a non-negative value. Comparisons go through
// division so no intermediate can overflow even near the type limits.
inline Int isqrt(Int x) {
    if (x < 0)
        throw ParameterError("isqrt of negative value");
    if (x < 2)
        return x;
    UInt ux = static_cast<UInt>(x);
    int bits = 0;
    for (UInt t = ux; t != 0; t >>= 1)
        ++bits;
    UInt r = UInt(1) << (bits / 2 + 1); // above the true root
    for (;;) {
        UInt next = (r + ux / r) / 2;
        if (next >= r)
            break;
        r = next;
    }
    while (r > ux / r)
        --r;
    while (r + 1 <= ux / (r + 1))
        ++r;
    return static_cast<Int>(r);
}

inline bool is_perfect_square(Int x) {
    if (x < 0)
        return false;
    Int r = isqrt(x);
    return r * r == x;
}

// Rounded division, halves away from zero. Denominator must be positive.
inline Int div_round_half_away(Int num, Int den) {
    if (den <= 0)
        throw ParameterError("rounding division requires positive denominator");
    bool neg = num < 0;
    UInt a = neg ? UInt(0) - UInt(num) : UInt(num);
    UInt d = static_cast<UInt>(den);
    if (a > (~UInt(0) - d) / 2)
        throw OverflowError("128-bit overflow in rounding division");
    UInt q = (2 * a + d) / (2 * d);
    return neg ? -static_cast<Int>(q) : static_cast<Int>(q);
}

} // namespace penc
