#pragma once

#include <array>
#include <vector>

namespace turbolab {

/// Received channel LLRs for one codeword, already split back into the
/// decoder's view: systematic, both parity streams, and the per-encoder
/// tail observations. Punctured positions hold exactly 0 (erasures).
struct LlrFrame {
    std::vector<double> ys;   // systematic, length K
    std::vector<double> y1p;  // parity of encoder 1, length K
    std::vector<double> y2p;  // parity of encoder 2, length K
    std::array<double, 3> tail1_sys{}, tail1_par{};  // encoder 1 tail
    std::array<double, 3> tail2_sys{}, tail2_par{};  // encoder 2 tail
};

}  // namespace turbolab
