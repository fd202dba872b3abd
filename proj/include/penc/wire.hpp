#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "penc/errors.hpp"
#include "penc/signal.hpp"

namespace penc {

// Wire session layout (all multi-byte integers big-endian):
//
//   magic   4 bytes  "PENC"
//   version 1 byte   = 1
//   P       2 bytes  samples per period
//   periods 2 bytes  periods per frame
//   count   4 bytes  number of symbols
//   then per symbol exactly 3 records:
//     waveform_id  1 byte
//     sample_count 4 bytes  (= P * periods)
//     samples      sample_count x 8 bytes, signed
//
// Waveform ids travel in clear (the shape is observable anyway); the powers
// and the waveform-to-power assignment never do.

inline constexpr std::array<std::uint8_t, 4> wire_magic{'P', 'E', 'N', 'C'};
inline constexpr std::uint8_t wire_version = 1;

struct WireSession {
    std::uint16_t period = 64;
    std::uint16_t periods = 1;
    std::vector<std::array<SignalFrame, 3>> symbols;
};

namespace detail {

inline void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint64_t take_be(int width, const char* field) {
        if (pos_ + static_cast<std::size_t>(width) > data_.size())
            throw IncompleteSessionError(std::string("session truncated in ") + field);
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v = v << 8 | data_[pos_++];
        return v;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::uint8_t> write_session(const WireSession& session) {
    const std::uint64_t samples_per_frame =
        std::uint64_t(session.period) * session.periods;
    if (session.symbols.size() > 0xFFFFFFFFu)
        throw SerializationError("too many symbols for a 4-byte count");
    std::vector<std::uint8_t> out;
    out.reserve(13 + session.symbols.size() * 3 * (5 + 8 * samples_per_frame));
    for (std::uint8_t b : wire_magic)
        out.push_back(b);
    out.push_back(wire_version);
    detail::put_be(out, session.period, 2);
    detail::put_be(out, session.periods, 2);
    detail::put_be(out, session.symbols.size(), 4);
    for (const auto& frames : session.symbols) {
        for (const SignalFrame& f : frames) {
            if (f.samples.size() != samples_per_frame)
                throw SerializationError("frame length does not match P * periods");
            if (f.waveform_id < 0 || f.waveform_id > 255)
                throw SerializationError("waveform id does not fit one byte");
            out.push_back(static_cast<std::uint8_t>(f.waveform_id));
            detail::put_be(out, f.samples.size(), 4);
            for (std::int64_t s : f.samples)
                detail::put_be(out, static_cast<std::uint64_t>(s), 8);
        }
    }
    return out;
}

inline WireSession read_session(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes);
    for (std::uint8_t expect : wire_magic)
        if (r.take_be(1, "magic") != expect)
            throw ProtocolError("bad magic, not a wire session");
    std::uint64_t version = r.take_be(1, "version");
    if (version != wire_version)
        throw UnsupportedVersionError("unsupported wire version " +
                                      std::to_string(version));
    WireSession session;
    session.period = static_cast<std::uint16_t>(r.take_be(2, "period"));
    session.periods = static_cast<std::uint16_t>(r.take_be(2, "periods"));
    const std::uint64_t count = r.take_be(4, "symbol count");
    const std::uint64_t samples_per_frame =
        std::uint64_t(session.period) * session.periods;
    // Growth is driven by bytes actually present, never by declared counts,
    // so a forged header cannot force a large allocation.
    for (std::uint64_t i = 0; i < count; ++i) {
        std::array<SignalFrame, 3> frames;
        for (auto& f : frames) {
            f.waveform_id = static_cast<int>(r.take_be(1, "waveform id"));
            std::uint64_t sample_count = r.take_be(4, "sample count");
            if (sample_count != samples_per_frame)
                throw ProtocolError("record sample count disagrees with header");
            for (std::uint64_t s = 0; s < sample_count; ++s)
                f.samples.push_back(
                    static_cast<std::int64_t>(r.take_be(8, "sample")));
        }
        session.symbols.push_back(std::move(frames));
    }
    if (!r.exhausted())
        throw ProtocolError("trailing bytes after the declared session");
    return session;
}

} // namespace penc
