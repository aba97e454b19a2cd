#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace turbolab {

/// The 8-state recursive systematic convolutional encoder behind both
/// constituent codes: feedback polynomial g0(D) = 1 + D^2 + D^3, forward
/// polynomial g1(D) = 1 + D + D^3. State packs the register bits newest
/// first, i.e. state = s1*4 + s2*2 + s3 with s1 the most recent bit.
///
/// Transitions are indexed t = 2*from + input_bit so that a stage's 16
/// branch metrics live in one flat array; tail stages use the subset where
/// the input equals the feedback bit (the termination flush).
struct TrellisSpec {
    static constexpr int kNumStates = 8;
    static constexpr int kNumTransitions = 16;
    static constexpr int kTailSteps = 3;

    int feedback_taps = 0;  // bit k <-> coefficient of D^k in g0
    int forward_taps = 0;   // bit k <-> coefficient of D^k in g1

    std::array<std::array<int, 2>, kNumStates> next_state{};
    std::array<std::array<int, 2>, kNumStates> parity{};
    std::array<int, kNumStates> forced_bit{};  // termination input per state

    // Flat transition tables, t = 2*from + bit.
    std::array<int, kNumTransitions> t_from{}, t_to{}, t_bit{}, t_parity{};

    // Incoming transition ids per destination state. Every state has exactly
    // two predecessors in a data stage; in a tail stage the flush halves the
    // live states, so a state has either two tail predecessors or none.
    std::array<std::array<std::int8_t, 2>, kNumStates> in_main{};
    std::array<std::array<std::int8_t, 2>, kNumStates> in_tail{};
    std::array<std::int8_t, kNumStates> in_tail_count{};

    std::vector<std::pair<int, int>> s0_pairs;  // (s', s) for u_k = 0
    std::vector<std::pair<int, int>> s1_pairs;  // (s', s) for u_k = 1
};

namespace detail {
inline int parity_of(int bits) {
    bits ^= bits >> 2;
    bits ^= bits >> 1;
    return bits & 1;
}

/// Maps polynomial taps (D^1..D^3) onto packed state bits. D^1 is the newest
/// register bit and sits at state bit 2.
inline int state_mask(int poly_taps) {
    int mask = 0;
    for (int k = 1; k <= 3; ++k)
        if ((poly_taps >> k) & 1) mask |= 1 << (3 - k);
    return mask;
}
}  // namespace detail

/// Advances the encoder one step. Returns (next state, parity bit).
inline std::pair<int, int> step(const TrellisSpec& spec, int state, int input) {
    if (state < 0 || state >= TrellisSpec::kNumStates)
        throw std::invalid_argument("trellis step: state id out of range");
    if (input != 0 && input != 1)
        throw std::invalid_argument("trellis step: input must be 0 or 1");
    return {spec.next_state[state][input], spec.parity[state][input]};
}

/// Derives all tables from the generator polynomials.
inline TrellisSpec build_trellis() {
    TrellisSpec spec;
    spec.feedback_taps = 0b1101;  // g0 = 1 + D^2 + D^3
    spec.forward_taps = 0b1011;   // g1 = 1 + D + D^3

    const int fb_mask = detail::state_mask(spec.feedback_taps);
    const int fw_mask = detail::state_mask(spec.forward_taps);

    for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
        const int fb = detail::parity_of(s & fb_mask);
        spec.forced_bit[s] = fb;  // makes the register input zero
        for (int b = 0; b < 2; ++b) {
            const int a = b ^ fb;  // register input after the feedback sum
            spec.next_state[s][b] = (a << 2) | (s >> 1);
            spec.parity[s][b] = a ^ detail::parity_of(s & fw_mask);
        }
    }

    for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
        for (int b = 0; b < 2; ++b) {
            const int t = 2 * s + b;
            spec.t_from[t] = s;
            spec.t_to[t] = spec.next_state[s][b];
            spec.t_bit[t] = b;
            spec.t_parity[t] = spec.parity[s][b];
            auto& pairs = (b == 0) ? spec.s0_pairs : spec.s1_pairs;
            pairs.emplace_back(s, spec.next_state[s][b]);
        }
    }

    std::array<int, TrellisSpec::kNumStates> n_main{};
    for (int t = 0; t < TrellisSpec::kNumTransitions; ++t) {
        const int to = spec.t_to[t];
        spec.in_main[to][n_main[to]++] = static_cast<std::int8_t>(t);
        if (spec.t_bit[t] == spec.forced_bit[spec.t_from[t]]) {
            auto& cnt = spec.in_tail_count[to];
            spec.in_tail[to][cnt++] = static_cast<std::int8_t>(t);
        }
    }
    return spec;
}

/// One constituent encoding: K data steps from state 0, then three
/// termination steps whose input is the feedback bit, flushing to state 0.
struct RsceOutput {
    std::vector<std::uint8_t> systematic;  // equals the input bits
    std::vector<std::uint8_t> parity;
    std::array<std::uint8_t, 3> tail_systematic{};
    std::array<std::uint8_t, 3> tail_parity{};
    int final_state = 0;
};

inline RsceOutput rsce_encode(const TrellisSpec& spec, const std::vector<std::uint8_t>& bits) {
    if (bits.empty()) throw std::invalid_argument("rsce_encode: empty input block");
    RsceOutput out;
    out.systematic = bits;
    out.parity.resize(bits.size());

    int state = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] > 1) throw std::invalid_argument("rsce_encode: input bits must be 0 or 1");
        out.parity[k] = static_cast<std::uint8_t>(spec.parity[state][bits[k]]);
        state = spec.next_state[state][bits[k]];
    }
    for (int i = 0; i < TrellisSpec::kTailSteps; ++i) {
        const int b = spec.forced_bit[state];
        out.tail_systematic[i] = static_cast<std::uint8_t>(b);
        out.tail_parity[i] = static_cast<std::uint8_t>(spec.parity[state][b]);
        state = spec.next_state[state][b];
    }
    out.final_state = state;
    return out;
}

}  // namespace turbolab
