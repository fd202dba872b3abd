#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "penc/errors.hpp"
#include "penc/prng.hpp"
#include "penc/ring.hpp"
#include "penc/wideint.hpp"

namespace penc {

// A symbol is carried by the additive ring parameters (a, b, m): an
// admissible sum of N = l*(m-1)+1 class representatives a + b*k_i has total
// amplitude
//     B_l = a*N + b*K(m,l),   K(m,l) = sum of the k_i.
// Three such amplitudes with distinct powers l determine (a, b, m), which
// the receiver recovers by solving the resulting quadratic system.
//
// Solvers and amplitude functions are pure. SessionKey draws are stateful:
// keep each key on one logical stream, with symbols processed in order.

// Index sequence k_i generating the K(m,l) sums. Affine in i, the same for
// every power l; the default k_i = i-1 gives K(m,l) = l(m-1)N/2. Other
// generators can be added, but only the default ships.
struct KSequence {
    Int scale = 1;
    Int offset = 0;

    bool operator==(const KSequence&) const = default;

    bool is_default() const { return scale == 1 && offset == 0; }

    Int k(Int i) const { return checked_add(checked_mul(scale, i - 1), offset); }

    // K(m, l) summed in closed form over i = 1..N, N = l(m-1)+1.
    Int sum(Int m, Int power) const {
        Int n_terms = checked_add(checked_mul(power, m - 1), 1);
        Int tri = checked_mul(n_terms, n_terms - 1) / 2;
        return checked_add(checked_mul(scale, tri), checked_mul(offset, n_terms));
    }
};

struct PowerTriple {
    std::int64_t l1;
    std::int64_t l2;
    std::int64_t l3;

    PowerTriple(std::int64_t a, std::int64_t b, std::int64_t c)
        : l1(a), l2(b), l3(c) {
        if (l1 < 1 || l2 < 1 || l3 < 1)
            throw ParameterError("powers must be positive");
        if (l1 == l2 || l1 == l3 || l2 == l3)
            throw ParameterError("powers must be pairwise distinct");
    }

    bool operator==(const PowerTriple&) const = default;

    std::array<std::int64_t, 3> list() const { return {l1, l2, l3}; }
};

// The (a, b, m) triple of one encoded symbol.
struct RingParams {
    std::int64_t a;
    std::int64_t b;
    std::int64_t m;

    bool operator==(const RingParams&) const = default;
};

// One plaintext symbol's ciphertext: three total amplitudes with secret
// powers, plus the keyed assignment of waveform templates to the powers.
struct SymbolCipher {
    PowerTriple powers;
    std::array<Int, 3> amplitudes;
    std::array<int, 3> waveform_ids;
};

// Keyed map of a plaintext byte to ring parameters. The arity m = y + 2
// carries the symbol; (a, b) is a keyed nonce realizing that arity:
// b = d(m-1) and a = d*u with gcd(u, m-1) = 1 force b/gcd(a,b)+1 = m.
inline RingParams encode_symbol(std::uint8_t y, SessionKey& key) {
    std::int64_t m = std::int64_t(y) + 2;
    std::int64_t d = 1 + key.uniform(16);
    if (m == 2)
        return RingParams{0, d, m};
    std::int64_t u;
    do {
        u = 1 + key.uniform(static_cast<std::uint32_t>(m - 2));
    } while (std::gcd(u, m - 1) != 1);
    return RingParams{d * u, d * (m - 1), m};
}

// Total amplitude B_l = a*N + b*K(m,l) with N = l(m-1)+1.
inline Int amplitude(const RingParams& p, std::int64_t power,
                     const KSequence& ks = {}) {
    if (power < 1)
        throw ParameterError("polyadic power must be >= 1");
    Int n_terms = checked_add(checked_mul(power, p.m - 1), 1);
    return checked_add(checked_mul(p.a, n_terms),
                       checked_mul(p.b, ks.sum(p.m, power)));
}

namespace detail {

// Keyed shuffle of the template ids {1,2,3}; consumes exactly two draws.
inline std::array<int, 3> keyed_permutation(SessionKey& key) {
    std::array<int, 3> ids{1, 2, 3};
    for (int i = 2; i >= 1; --i) {
        auto j = key.uniform(static_cast<std::uint32_t>(i) + 1);
        std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    }
    return ids;
}

} // namespace detail

inline SymbolCipher make_cipher(const RingParams& p, const PowerTriple& powers,
                                const KSequence& ks, SessionKey& key) {
    std::array<Int, 3> amps{amplitude(p, powers.l1, ks),
                            amplitude(p, powers.l2, ks),
                            amplitude(p, powers.l3, ks)};
    return SymbolCipher{powers, amps, detail::keyed_permutation(key)};
}

// Closed-form solution of the quadratic system for powers (1,2,3) and the
// default K sequence:
//     a = 3B1 - 3B2 + B3
//     m = (7B1 - 4B2 + B3 +- sqrt(D)) / (4a)
//     D = B1^2 - 8B2B1 - 2B3B1 + 16B2^2 + B3^2 - 8B2B3
// with the sign picked so m is an integer >= 2, and b recovered exactly by
// back-substitution into B1 = a*m + b*m(m-1)/2, then checked against the
// remaining two equations.
struct ClosedFormSolution {
    RingParams params;
    Int discriminant;
    Int sqrt_discriminant;
    bool plus_sign;
};

inline Int closed_form_discriminant(const std::array<Int, 3>& B) {
    const Int b1 = B[0], b2 = B[1], b3 = B[2];
    Int d = checked_mul(b1, b1);
    d = checked_sub(d, checked_mul(8, checked_mul(b2, b1)));
    d = checked_sub(d, checked_mul(2, checked_mul(b3, b1)));
    d = checked_add(d, checked_mul(16, checked_mul(b2, b2)));
    d = checked_add(d, checked_mul(b3, b3));
    d = checked_sub(d, checked_mul(8, checked_mul(b2, b3)));
    return d;
}

namespace detail {

inline bool satisfies_system(const std::array<Int, 3>& B, Int a, Int b, Int m) {
    // B1 = a m + b m(m-1)/2; B2 = a(2m-1) + b(m-1)(2m-1);
    // B3 = a(3m-2) + 3b(m-1)(3m-2)/2. Doubled to stay integral.
    Int mm1 = checked_sub(m, 1);
    Int e1 = checked_add(checked_mul(checked_mul(2, a), m),
                         checked_mul(b, checked_mul(m, mm1)));
    if (e1 != checked_mul(2, B[0]))
        return false;
    Int t2 = checked_sub(checked_mul(2, m), 1);
    Int e2 = checked_add(checked_mul(a, t2), checked_mul(b, checked_mul(mm1, t2)));
    if (e2 != B[1])
        return false;
    Int t3 = checked_sub(checked_mul(3, m), 2);
    Int e3 = checked_add(checked_mul(checked_mul(2, a), t3),
                         checked_mul(checked_mul(3, b), checked_mul(mm1, t3)));
    return e3 == checked_mul(2, B[2]);
}

} // namespace detail

inline ClosedFormSolution solve_closed_form_detailed(const std::array<Int, 3>& B) {
    const Int a = checked_add(checked_sub(checked_mul(3, B[0]), checked_mul(3, B[1])), B[2]);
    if (a <= 0)
        throw NoSolutionError("closed form requires a = 3B1-3B2+B3 > 0, got " +
                              to_string(a));
    const Int disc = closed_form_discriminant(B);
    if (disc < 0)
        throw NoSolutionError("negative discriminant " + to_string(disc));
    const Int root = isqrt(disc);
    if (checked_mul(root, root) != disc)
        throw NoSolutionError("discriminant " + to_string(disc) +
                              " is not a perfect square");

    const Int head = checked_add(
        checked_sub(checked_mul(7, B[0]), checked_mul(4, B[1])), B[2]);
    const Int denom = checked_mul(4, a);
    std::optional<ClosedFormSolution> found;
    bool failed_verification = false;
    for (bool plus : {true, false}) {
        Int num = plus ? checked_add(head, root) : checked_sub(head, root);
        if (num % denom != 0)
            continue;
        Int m = num / denom;
        if (m < 2)
            continue;
        // b from B1 = a m + b m(m-1)/2
        Int num_b = checked_mul(2, checked_sub(B[0], checked_mul(a, m)));
        Int den_b = checked_mul(m - 1, m);
        if (num_b % den_b != 0)
            continue;
        Int b = num_b / den_b;
        // the sign rule found integers; the rest is verification
        if (b < 1 || a > b - 1 || !detail::satisfies_system(B, a, b, m)) {
            failed_verification = true;
            continue;
        }
        if (!fits_int64(a) || !fits_int64(b) || !fits_int64(m))
            throw OverflowError("solution exceeds the 64-bit parameter width");
        ClosedFormSolution sol{RingParams{static_cast<std::int64_t>(a),
                                          static_cast<std::int64_t>(b),
                                          static_cast<std::int64_t>(m)},
                               disc, root, plus};
        if (found && !(found->params == sol.params))
            throw AmbiguousCipherError("both signs verify: m=" +
                                       std::to_string(found->params.m) + " and m=" +
                                       std::to_string(sol.params.m));
        if (!found)
            found = sol;
    }
    if (!found) {
        if (failed_verification)
            throw InconsistentCipherError(
                "the sign rule yields integers that fail the remaining "
                "equations or the class bounds");
        throw NoSolutionError("no sign choice yields integers with m >= 2");
    }
    return *found;
}

inline RingParams solve_closed_form(const std::array<Int, 3>& B) {
    return solve_closed_form_detailed(B).params;
}

// General solver: scan candidate arities m, solve the first two amplitude
// equations as a linear system over the rationals, accept exact integral
// solutions that satisfy the third equation, the class bounds and the
// arity consistency check.
inline std::vector<RingParams> search_candidates(const std::array<Int, 3>& B,
                                                 const PowerTriple& powers,
                                                 const KSequence& ks = {},
                                                 std::int64_t m_max = 1024) {
    if (m_max < 2)
        throw ParameterError("m_max must be >= 2");
    std::vector<RingParams> found;
    const auto power_list = powers.list();
    for (std::int64_t m = 2; m <= m_max; ++m) {
        std::array<Int, 3> n_terms;
        std::array<Int, 3> ksum;
        for (std::size_t j = 0; j < 3; ++j) {
            n_terms[j] = checked_add(checked_mul(power_list[j], m - 1), 1);
            ksum[j] = ks.sum(m, power_list[j]);
        }
        Int det = checked_sub(checked_mul(n_terms[0], ksum[1]),
                              checked_mul(n_terms[1], ksum[0]));
        if (det == 0)
            continue;
        Int num_a = checked_sub(checked_mul(B[0], ksum[1]), checked_mul(B[1], ksum[0]));
        Int num_b = checked_sub(checked_mul(n_terms[0], B[1]), checked_mul(n_terms[1], B[0]));
        if (num_a % det != 0 || num_b % det != 0)
            continue;
        Int a = num_a / det;
        Int b = num_b / det;
        if (b < 1 || a < 0 || a > b - 1)
            continue;
        if (checked_add(checked_mul(a, n_terms[2]), checked_mul(b, ksum[2])) != B[2])
            continue;
        if (!fits_int64(a) || !fits_int64(b))
            continue;
        RingParams p{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b), m};
        if (additive_arity(CongruenceClass(p.a, p.b)) != m)
            continue;
        found.push_back(p);
    }
    return found;
}

inline RingParams solve_search(const std::array<Int, 3>& B,
                               const PowerTriple& powers,
                               const KSequence& ks = {},
                               std::int64_t m_max = 1024) {
    auto found = search_candidates(B, powers, ks, m_max);
    if (found.empty())
        throw NoSolutionError("no (a,b,m) with m <= " + std::to_string(m_max) +
                              " matches the amplitudes");
    if (found.size() > 1) {
        std::ostringstream os;
        os << "amplitudes admit " << found.size() << " parameter triples:";
        for (const auto& p : found)
            os << " (" << p.a << "," << p.b << "," << p.m << ")";
        throw AmbiguousCipherError(os.str());
    }
    return found.front();
}

// Inverse of the symbol map: y = m - 2, after checking that (a, b) really
// has additive arity m.
inline std::uint8_t decode_symbol(const RingParams& p) {
    if (additive_arity(CongruenceClass(p.a, p.b)) != p.m) {
        std::ostringstream os;
        os << "class [[" << p.a << "]]_" << p.b << " has additive arity "
           << additive_arity(CongruenceClass(p.a, p.b)) << ", cipher claims " << p.m;
        throw InconsistentCipherError(os.str());
    }
    std::int64_t y = p.m - 2;
    if (y < 0 || y > 255)
        throw SymbolRangeError("arity " + std::to_string(p.m) +
                               " maps outside the byte alphabet");
    return static_cast<std::uint8_t>(y);
}

inline std::vector<SymbolCipher> encrypt_stream(std::span<const std::uint8_t> plaintext,
                                                SessionKey& key,
                                                const PowerTriple& powers = {1, 2, 3},
                                                const KSequence& ks = {}) {
    std::vector<SymbolCipher> out;
    out.reserve(plaintext.size());
    for (std::uint8_t y : plaintext) {
        RingParams p = encode_symbol(y, key);
        out.push_back(make_cipher(p, powers, ks, key));
    }
    return out;
}

namespace detail {

// Re-derive the keyed draws for one symbol and check them against the
// solved parameters and the observed waveform assignment. Consumes the
// same number of draws as the sender, keeping the streams aligned.
inline void verify_symbol_key(const RingParams& p,
                              const std::array<int, 3>& waveform_ids,
                              SessionKey& key) {
    std::int64_t d = 1 + key.uniform(16);
    if (p.m == 2) {
        if (p.a != 0 || p.b != d)
            throw InconsistentCipherError("nonce check failed for m=2 symbol");
    } else {
        std::int64_t u;
        do {
            u = 1 + key.uniform(static_cast<std::uint32_t>(p.m - 2));
        } while (std::gcd(u, p.m - 1) != 1);
        if (p.b != d * (p.m - 1) || p.a != d * u)
            throw InconsistentCipherError("nonce check failed: parameters do not "
                                          "match the keyed draws");
    }
    if (keyed_permutation(key) != waveform_ids)
        throw InconsistentCipherError("waveform assignment does not match the key");
}

} // namespace detail

// Per cipher: solve for (a, b, m) -- the closed form when it applies, always
// cross-checked against the search -- then verify the keyed nonce and
// waveform assignment and map m back to the plaintext byte.
inline std::vector<std::uint8_t> decrypt_stream(std::span<const SymbolCipher> ciphers,
                                                SessionKey& key,
                                                const KSequence& ks = {},
                                                std::int64_t m_max = 1024) {
    std::vector<std::uint8_t> out;
    out.reserve(ciphers.size());
    const PowerTriple canonical{1, 2, 3};
    for (std::size_t idx = 0; idx < ciphers.size(); ++idx) {
        const SymbolCipher& c = ciphers[idx];
        try {
            RingParams p = solve_search(c.amplitudes, c.powers, ks, m_max);
            if (c.powers == canonical && ks.is_default() && p.a > 0) {
                RingParams q = solve_closed_form(c.amplitudes);
                if (!(q == p))
                    throw InconsistentCipherError("closed form and search disagree");
            }
            detail::verify_symbol_key(p, c.waveform_ids, key);
            out.push_back(decode_symbol(p));
        } catch (const Error& e) {
            throw DecryptError(idx, e.what());
        }
    }
    return out;
}

} // namespace penc
