#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "turbolab/siso.hpp"
#include "turbolab/trellis.hpp"

namespace turbolab {

/// Ground-truth symbol-wise MAP posteriors by direct summation over all 2^K
/// information sequences. Each candidate is pushed through the encoder
/// (including the three termination steps), its exact path metric
/// accumulated, and the per-bit LLR formed as a stable log-sum-exp ratio.
/// Deliberately shares nothing with the alpha/beta recursions, so it can
/// stand as an independent oracle for the log-MAP decoder. Cost is 2^K.
inline std::vector<double> exhaustive_map_oracle(const SisoInput& in, const TrellisSpec& spec) {
    const int K = in.block_len();
    if (K < 1 || K > 12)
        throw std::invalid_argument("exhaustive_map_oracle: K must be in [1, 12]");

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> acc1(K, kNegInf), acc0(K, kNegInf);

    for (std::uint32_t word = 0; word < (1u << K); ++word) {
        double metric = 0.0;
        int state = 0;
        for (int k = 0; k < K; ++k) {
            const int b = (word >> k) & 1u;
            const double u = b ? 1.0 : -1.0;
            const double p = spec.parity[state][b] ? 1.0 : -1.0;
            metric += 0.5 * (u * (in.la[k] + in.ys[k]) + p * in.yp[k]);
            state = spec.next_state[state][b];
        }
        for (int i = 0; i < TrellisSpec::kTailSteps; ++i) {
            const int b = spec.forced_bit[state];
            const double u = b ? 1.0 : -1.0;
            const double p = spec.parity[state][b] ? 1.0 : -1.0;
            metric += 0.5 * (u * in.tail_ys[i] + p * in.tail_yp[i]);
            state = spec.next_state[state][b];
        }
        for (int k = 0; k < K; ++k) {
            double& acc = ((word >> k) & 1u) ? acc1[k] : acc0[k];
            acc = (acc == kNegInf) ? metric : maxstar(acc, metric);
        }
    }

    std::vector<double> posterior(K);
    for (int k = 0; k < K; ++k) posterior[k] = acc1[k] - acc0[k];
    return posterior;
}

}  // namespace turbolab
