#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "penc/errors.hpp"

namespace penc {

// Shared-secret session key with a pinned deterministic generator, so that
// draw sequences are bit-exact across implementations. The generator is the
// 64-bit linear congruential recurrence
//     state' = 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
// emitting the top 32 bits of each new state. This is obfuscation plumbing,
// not a cryptographic PRNG; see the project README.
struct SessionKey {
    std::array<std::uint8_t, 16> key_bytes{};
    std::uint64_t state = 0;

    static SessionKey from_bytes(const std::array<std::uint8_t, 16>& bytes) {
        std::uint64_t hi = 0;
        std::uint64_t lo = 0;
        for (int i = 0; i < 8; ++i) {
            hi = hi << 8 | bytes[static_cast<std::size_t>(i)];
            lo = lo << 8 | bytes[static_cast<std::size_t>(i) + 8];
        }
        return SessionKey{bytes, hi ^ lo};
    }

    static SessionKey from_hex(std::string_view hex) {
        if (hex.size() != 32)
            throw ParameterError("key must be exactly 32 hex characters");
        auto nibble = [](char c) -> unsigned {
            if (c >= '0' && c <= '9')
                return static_cast<unsigned>(c - '0');
            if (c >= 'a' && c <= 'f')
                return static_cast<unsigned>(c - 'a' + 10);
            if (c >= 'A' && c <= 'F')
                return static_cast<unsigned>(c - 'A' + 10);
            throw ParameterError("key contains a non-hex character");
        };
        std::array<std::uint8_t, 16> bytes{};
        for (std::size_t i = 0; i < 16; ++i)
            bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 |
                                                 nibble(hex[2 * i + 1]));
        return from_bytes(bytes);
    }

    std::uint32_t next() {
        state = 6364136223846793005ULL * state + 1442695040888963407ULL;
        return static_cast<std::uint32_t>(state >> 32);
    }

    // Uniform draw in [0, range): rejects raw values at or above
    // floor(2^32/range)*range, then reduces modulo range.
    std::uint32_t uniform(std::uint32_t range) {
        if (range == 0)
            throw ParameterError("uniform range must be >= 1");
        const std::uint64_t threshold = (std::uint64_t(1) << 32) / range * range;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= threshold);
        return static_cast<std::uint32_t>(r % range);
    }
};

} // namespace penc
