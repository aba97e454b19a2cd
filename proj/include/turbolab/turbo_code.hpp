#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "turbolab/llr_frame.hpp"
#include "turbolab/trellis.hpp"

namespace turbolab {

/// Code parameters: block length K, QPP interleaver coefficients, and the
/// puncturing mode. Unpunctured codewords carry 3K+12 bits, punctured ones
/// 2K+12 (all systematic and tail bits survive, parity streams alternate).
struct TurboCodeConfig {
    int block_len = 0;  // K
    int qpp_f1 = 0;
    int qpp_f2 = 0;
    bool punctured = false;

    std::vector<int> pi;      // pi[i] = (f1*i + f2*i^2) mod K
    std::vector<int> pi_inv;  // inverse permutation

    int codeword_len() const { return (punctured ? 2 : 3) * block_len + 12; }
    double rate() const { return static_cast<double>(block_len) / codeword_len(); }
};

/// Builds a config and validates that the QPP polynomial permutes {0..K-1}.
inline TurboCodeConfig make_turbo_config(int block_len, int f1, int f2, bool punctured) {
    if (block_len < 1) throw std::invalid_argument("turbo config: K must be >= 1");
    TurboCodeConfig cfg;
    cfg.block_len = block_len;
    cfg.qpp_f1 = f1;
    cfg.qpp_f2 = f2;
    cfg.punctured = punctured;
    cfg.pi.resize(block_len);
    cfg.pi_inv.assign(block_len, -1);
    for (int i = 0; i < block_len; ++i) {
        const long long v =
            (static_cast<long long>(f1) * i + static_cast<long long>(f2) * i * i) % block_len;
        const int p = static_cast<int>((v + block_len) % block_len);
        cfg.pi[i] = p;
        if (cfg.pi_inv[p] != -1)
            throw std::invalid_argument("turbo config: (f1, f2) is not a permutation for this K");
        cfg.pi_inv[p] = i;
    }
    return cfg;
}

/// The paper's operating point: K=40 with the standard LTE coefficients.
inline TurboCodeConfig lte40_config(bool punctured) { return make_turbo_config(40, 3, 10, punctured); }

/// out[i] = seq[pi(i)].
template <class T>
std::vector<T> qpp_interleave(const TurboCodeConfig& cfg, const std::vector<T>& seq) {
    if (static_cast<int>(seq.size()) != cfg.block_len)
        throw std::invalid_argument("qpp_interleave: sequence length != K");
    std::vector<T> out(seq.size());
    for (int i = 0; i < cfg.block_len; ++i) out[i] = seq[cfg.pi[i]];
    return out;
}

/// Exact inverse of qpp_interleave.
template <class T>
std::vector<T> qpp_deinterleave(const TurboCodeConfig& cfg, const std::vector<T>& seq) {
    if (static_cast<int>(seq.size()) != cfg.block_len)
        throw std::invalid_argument("qpp_deinterleave: sequence length != K");
    std::vector<T> out(seq.size());
    for (int i = 0; i < cfg.block_len; ++i) out[cfg.pi[i]] = seq[i];
    return out;
}

/// Encoded codeword. `tail` holds 12 bits: encoder 1's (sys, par) pairs for
/// its three flush steps, then encoder 2's. `flattened` is the on-air order
/// (see docs/formats.md) after optional puncturing.
struct Codeword {
    std::vector<std::uint8_t> systematic;
    std::vector<std::uint8_t> parity1;
    std::vector<std::uint8_t> parity2;
    std::array<std::uint8_t, 12> tail{};
    std::vector<std::uint8_t> flattened;
};

/// On-air order: per position k the systematic bit, then parity1 and parity2
/// (unpunctured) or the single surviving parity (parity1 at even k, parity2
/// at odd k); the 12 tail bits close the codeword.
inline std::vector<std::uint8_t> puncture(const TurboCodeConfig& cfg, const Codeword& cw) {
    if (static_cast<int>(cw.systematic.size()) != cfg.block_len)
        throw std::invalid_argument("puncture: codeword length != K");
    std::vector<std::uint8_t> out;
    out.reserve(cfg.codeword_len());
    for (int k = 0; k < cfg.block_len; ++k) {
        out.push_back(cw.systematic[k]);
        if (!cfg.punctured) {
            out.push_back(cw.parity1[k]);
            out.push_back(cw.parity2[k]);
        } else {
            out.push_back((k % 2 == 0) ? cw.parity1[k] : cw.parity2[k]);
        }
    }
    out.insert(out.end(), cw.tail.begin(), cw.tail.end());
    return out;
}

/// Restores the decoder frame from flattened LLRs, inserting 0 at punctured
/// parity positions.
inline LlrFrame depuncture(const TurboCodeConfig& cfg, const std::vector<double>& llrs) {
    if (static_cast<int>(llrs.size()) != cfg.codeword_len())
        throw std::invalid_argument("depuncture: LLR count != codeword length");
    LlrFrame f;
    const int K = cfg.block_len;
    f.ys.resize(K);
    f.y1p.assign(K, 0.0);
    f.y2p.assign(K, 0.0);
    std::size_t pos = 0;
    for (int k = 0; k < K; ++k) {
        f.ys[k] = llrs[pos++];
        if (!cfg.punctured) {
            f.y1p[k] = llrs[pos++];
            f.y2p[k] = llrs[pos++];
        } else if (k % 2 == 0) {
            f.y1p[k] = llrs[pos++];
        } else {
            f.y2p[k] = llrs[pos++];
        }
    }
    for (int i = 0; i < 3; ++i) {
        f.tail1_sys[i] = llrs[pos++];
        f.tail1_par[i] = llrs[pos++];
    }
    for (int i = 0; i < 3; ++i) {
        f.tail2_sys[i] = llrs[pos++];
        f.tail2_par[i] = llrs[pos++];
    }
    return f;
}

/// Inverse of depuncture: packs a frame back into the on-air LLR order,
/// dropping the erased parity positions.
inline std::vector<double> flatten_llr_frame(const TurboCodeConfig& cfg, const LlrFrame& f) {
    if (static_cast<int>(f.ys.size()) != cfg.block_len)
        throw std::invalid_argument("flatten_llr_frame: frame length != K");
    std::vector<double> out;
    out.reserve(cfg.codeword_len());
    for (int k = 0; k < cfg.block_len; ++k) {
        out.push_back(f.ys[k]);
        if (!cfg.punctured) {
            out.push_back(f.y1p[k]);
            out.push_back(f.y2p[k]);
        } else {
            out.push_back(k % 2 == 0 ? f.y1p[k] : f.y2p[k]);
        }
    }
    for (int i = 0; i < 3; ++i) {
        out.push_back(f.tail1_sys[i]);
        out.push_back(f.tail1_par[i]);
    }
    for (int i = 0; i < 3; ++i) {
        out.push_back(f.tail2_sys[i]);
        out.push_back(f.tail2_par[i]);
    }
    return out;
}

/// Parallel concatenation: encoder 1 on u, encoder 2 on the interleaved u,
/// each terminated independently.
inline Codeword turbo_encode(const TurboCodeConfig& cfg, const TrellisSpec& spec,
                             const std::vector<std::uint8_t>& u) {
    if (static_cast<int>(u.size()) != cfg.block_len)
        throw std::invalid_argument("turbo_encode: input length != K");
    const RsceOutput enc1 = rsce_encode(spec, u);
    const RsceOutput enc2 = rsce_encode(spec, qpp_interleave(cfg, u));

    Codeword cw;
    cw.systematic = u;
    cw.parity1 = enc1.parity;
    cw.parity2 = enc2.parity;
    for (int i = 0; i < 3; ++i) {
        cw.tail[2 * i] = enc1.tail_systematic[i];
        cw.tail[2 * i + 1] = enc1.tail_parity[i];
        cw.tail[6 + 2 * i] = enc2.tail_systematic[i];
        cw.tail[6 + 2 * i + 1] = enc2.tail_parity[i];
    }
    cw.flattened = puncture(cfg, cw);
    return cw;
}

}  // namespace turbolab
