#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "turbolab/rng.hpp"

namespace turbolab {

/// AWGN channel at a given Eb/N0. With unit symbol energy and code rate R,
/// the per-dimension noise variance is sigma^2 = 1 / (2 R 10^(snr/10)).
/// `llr_clamp` bounds demapped LLRs so noiseless tests stay finite.
struct ChannelConfig {
    double snr_db = 0.0;  // Eb/N0 in dB
    double rate = 1.0;    // K / N
    std::uint64_t seed = 0;
    double llr_clamp = 50.0;

    double sigma2() const { return 1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0)); }
    double sigma() const { return std::sqrt(sigma2()); }
};

/// BPSK: bit 0 -> -1, bit 1 -> +1.
inline std::vector<double> bpsk_modulate(const std::vector<std::uint8_t>& bits) {
    std::vector<double> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = bits[i] ? 1.0 : -1.0;
    return symbols;
}

/// r = x + n with n ~ N(0, sigma^2) i.i.d.; deterministic under the seed.
inline std::vector<double> awgn(const std::vector<double>& symbols, const ChannelConfig& cfg, Rng& rng) {
    const double sigma = cfg.sigma();
    std::vector<double> received(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) received[i] = symbols[i] + sigma * rng.gaussian();
    return received;
}

inline std::vector<double> awgn(const std::vector<double>& symbols, const ChannelConfig& cfg) {
    Rng rng(cfg.seed);
    return awgn(symbols, cfg, rng);
}

/// y = 2 r / sigma^2, positive meaning bit 1 more likely. Values are clamped
/// to +-llr_clamp.
inline std::vector<double> llr_demap(const std::vector<double>& received, const ChannelConfig& cfg) {
    const double s2 = cfg.sigma2();
    if (!(s2 > 0.0)) throw std::invalid_argument("llr_demap: sigma must be positive");
    std::vector<double> llrs(received.size());
    const double scale = 2.0 / s2;
    for (std::size_t i = 0; i < received.size(); ++i) {
        double y = scale * received[i];
        if (y > cfg.llr_clamp) y = cfg.llr_clamp;
        if (y < -cfg.llr_clamp) y = -cfg.llr_clamp;
        llrs[i] = y;
    }
    return llrs;
}

/// Noiseless stand-in for modulate+awgn+demap: each bit maps straight to a
/// clamped LLR of the right sign.
inline std::vector<double> noiseless_llrs(const std::vector<std::uint8_t>& bits, double llr_clamp = 50.0) {
    std::vector<double> llrs(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) llrs[i] = bits[i] ? llr_clamp : -llr_clamp;
    return llrs;
}

}  // namespace turbolab
