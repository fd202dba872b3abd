#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "penc/codec.hpp"
#include "penc/signal.hpp"
#include "penc/wire.hpp"

namespace penc {

// Sender pipeline: bytes -> ring parameters -> amplitudes -> frames.
// Record j of a symbol carries the amplitude of power l_j on the template
// the keyed permutation assigned to that power.
inline WireSession encrypt_to_session(std::span<const std::uint8_t> plaintext,
                                      SessionKey& key, const PowerTriple& powers,
                                      const KSequence& ks = {},
                                      std::uint16_t period = 64,
                                      std::uint16_t periods = 1) {
    WireSession session;
    session.period = period;
    session.periods = periods;
    std::map<int, WaveformTemplate> templates;
    for (int id = 1; id <= 3; ++id)
        templates.emplace(id, make_template(id, period));
    for (const SymbolCipher& c : encrypt_stream(plaintext, key, powers, ks)) {
        std::array<SignalFrame, 3> frames;
        for (std::size_t j = 0; j < 3; ++j)
            frames[j] = synthesize(c.amplitudes[j],
                                   templates.at(c.waveform_ids[j]), periods);
        session.symbols.push_back(std::move(frames));
    }
    return session;
}

// Receiver pipeline: frames -> recovered amplitudes -> solve -> bytes.
// Frame errors are reported with the symbol index, like solver errors.
inline std::vector<std::uint8_t> decrypt_session(const WireSession& session,
                                                 SessionKey& key,
                                                 const PowerTriple& powers,
                                                 const KSequence& ks = {},
                                                 std::int64_t m_max = 1024) {
    std::map<int, WaveformTemplate> templates;
    std::vector<SymbolCipher> ciphers;
    ciphers.reserve(session.symbols.size());
    for (std::size_t idx = 0; idx < session.symbols.size(); ++idx) {
        const auto& frames = session.symbols[idx];
        try {
            std::array<Int, 3> amps;
            std::array<int, 3> ids;
            for (std::size_t j = 0; j < 3; ++j) {
                int id = frames[j].waveform_id;
                auto it = templates.find(id);
                if (it == templates.end())
                    it = templates.emplace(id, make_template(id, session.period)).first;
                amps[j] = recover_amplitude(frames[j], it->second);
                ids[j] = id;
            }
            ciphers.push_back(SymbolCipher{powers, amps, ids});
        } catch (const Error& e) {
            throw DecryptError(idx, e.what());
        }
    }
    return decrypt_stream(ciphers, key, ks, m_max);
}

} // namespace penc
