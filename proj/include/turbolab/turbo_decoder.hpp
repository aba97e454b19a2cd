#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "turbolab/llr_frame.hpp"
#include "turbolab/siso.hpp"
#include "turbolab/turbo_code.hpp"

namespace turbolab {

/// Shared immutable trellis for the LTE polynomials.
inline const TrellisSpec& default_trellis() {
    static const TrellisSpec spec = build_trellis();
    return spec;
}

struct TurboDecodeResult {
    std::vector<double> llrs;        // final posterior, natural bit order
    std::vector<std::uint8_t> bits;  // hard decisions, LLR >= 0 -> 1
};

/// Iterative decoding: decoder 1 on the natural-order inputs, decoder 2 on
/// the interleaved ones, extrinsic LLRs exchanged through the permutation.
/// The a priori input of the first pass is zero; the final posterior is
/// decoder 2's, deinterleaved.
inline TurboDecodeResult turbo_decode(const LlrFrame& frame, const TurboCodeConfig& cfg,
                                      int iterations, DecodeMode mode,
                                      const TrellisSpec& spec = default_trellis(),
                                      bool normalize = true) {
    const int K = cfg.block_len;
    if (iterations < 1) throw std::invalid_argument("turbo_decode: iterations must be >= 1");
    if (static_cast<int>(frame.ys.size()) != K)
        throw std::invalid_argument("turbo_decode: frame length != K");

    const std::vector<double> ys_int = qpp_interleave(cfg, frame.ys);
    std::vector<double> la1(K, 0.0);

    SisoOutput out2;
    for (int it = 0; it < iterations; ++it) {
        const SisoInput in1{frame.ys, frame.y1p, la1, frame.tail1_sys, frame.tail1_par};
        const SisoOutput out1 = siso_decode(in1, spec, mode, normalize);
        const std::vector<double> la2 = qpp_interleave(cfg, out1.extrinsic);
        const SisoInput in2{ys_int, frame.y2p, la2, frame.tail2_sys, frame.tail2_par};
        out2 = siso_decode(in2, spec, mode, normalize);
        la1 = qpp_deinterleave(cfg, out2.extrinsic);
    }

    TurboDecodeResult res;
    res.llrs = qpp_deinterleave(cfg, out2.posterior);
    res.bits.resize(K);
    for (int k = 0; k < K; ++k) res.bits[k] = res.llrs[k] >= 0.0 ? 1 : 0;
    return res;
}

}  // namespace turbolab
