#pragma once

#include <cstdint>
#include <vector>

#include "penc/errors.hpp"
#include "penc/prng.hpp"
#include "penc/wideint.hpp"

namespace penc {

// Integer-exact waveform prototypes. Every transmitted sample is an exact
// integer B * proto[s], so amplitude recovery by matched filtering is exact
// and bit-stable across implementations; no floating point anywhere.

struct WaveformTemplate {
    int waveform_id;        // 1 rectangular, 2 triangular, 3 sawtooth
    std::int64_t period;    // samples per period
    std::vector<std::int64_t> proto;
    Int energy;             // sum of proto[s]^2
    Int abs_sum;            // sum of |proto[s]|
};

inline WaveformTemplate make_template(int waveform_id, std::int64_t period) {
    if (period < 4 || period % 4 != 0)
        throw ParameterError("template period must be >= 4 and divisible by 4");
    if (waveform_id < 1 || waveform_id > 3)
        throw ParameterError("waveform id must be 1, 2 or 3");
    WaveformTemplate t{waveform_id, period, {}, 0, 0};
    t.proto.reserve(static_cast<std::size_t>(period));
    for (std::int64_t s = 0; s < period; ++s) {
        std::int64_t v = 0;
        switch (waveform_id) {
        case 1:
            v = s < period / 2 ? 1 : -1;
            break;
        case 2:
            if (s < period / 4)
                v = s;
            else if (s < 3 * period / 4)
                v = period / 2 - s;
            else
                v = s - period;
            break;
        case 3:
            v = s - period / 2;
            break;
        }
        t.proto.push_back(v);
        t.energy += Int(v) * v;
        t.abs_sum += v < 0 ? -Int(v) : Int(v);
    }
    return t;
}

// One integer-sampled frame carrying a single amplitude on one template.
struct SignalFrame {
    int waveform_id;
    std::vector<std::int64_t> samples;
};

// samples[s] = B * proto[s mod P]. Samples must fit the 64-bit wire width.
inline SignalFrame synthesize(Int B, const WaveformTemplate& tpl,
                              std::int64_t periods = 1) {
    if (periods < 1)
        throw ParameterError("periods must be >= 1");
    SignalFrame f{tpl.waveform_id, {}};
    Int total = checked_mul(tpl.period, periods);
    if (!fits_int64(total))
        throw OverflowError("frame length exceeds addressable range");
    f.samples.reserve(static_cast<std::size_t>(total));
    for (std::int64_t rep = 0; rep < periods; ++rep) {
        for (std::int64_t v : tpl.proto) {
            Int s = checked_mul(B, v);
            if (!fits_int64(s))
                throw OverflowError("sample exceeds the 64-bit wire width");
            f.samples.push_back(static_cast<std::int64_t>(s));
        }
    }
    return f;
}

// Matched filter: B = round(<frame, proto> / (periods * E)), rounding halves
// away from zero. Exact inverse of synthesize on noiseless frames, and still
// exact under per-sample noise |eta| with eta * sum|proto| < E/2.
inline Int recover_amplitude(const SignalFrame& frame, const WaveformTemplate& tpl) {
    if (frame.waveform_id != tpl.waveform_id)
        throw FrameError("frame/template waveform mismatch");
    if (frame.samples.empty() ||
        frame.samples.size() % static_cast<std::size_t>(tpl.period) != 0)
        throw FrameError("frame length must be a positive multiple of the period");
    const std::size_t period = static_cast<std::size_t>(tpl.period);
    Int corr = 0;
    for (std::size_t s = 0; s < frame.samples.size(); ++s)
        corr = checked_add(corr, checked_mul(frame.samples[s], tpl.proto[s % period]));
    Int denom = checked_mul(static_cast<Int>(frame.samples.size() / period), tpl.energy);
    return div_round_half_away(corr, denom);
}

// Test harness for channel robustness: uniform keyed perturbation in
// [-eta, eta] per sample.
inline SignalFrame add_noise(SignalFrame frame, std::int64_t eta, SessionKey& key) {
    if (eta < 0)
        throw ParameterError("noise bound must be >= 0");
    if (eta > 0x7FFFFFFE)
        throw ParameterError("noise bound too large for a 32-bit draw");
    if (eta == 0)
        return frame;
    for (auto& s : frame.samples) {
        std::int64_t delta =
            static_cast<std::int64_t>(key.uniform(static_cast<std::uint32_t>(2 * eta + 1))) - eta;
        Int v = checked_add(Int(s), delta);
        if (!fits_int64(v))
            throw OverflowError("noisy sample exceeds the 64-bit wire width");
        s = static_cast<std::int64_t>(v);
    }
    return frame;
}

} // namespace penc
