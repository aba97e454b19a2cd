#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "turbolab/trellis.hpp"

namespace turbolab {

/// "Log zero": the boundary/dead-state constant of the trellis recursions.
inline constexpr double kLogZero = -128.0;

enum class DecodeMode { kLogMap, kMaxLogMap };

/// Jacobian logarithm: exact log(e^x + e^y).
inline double maxstar(double x, double y) {
    return std::max(x, y) + std::log1p(std::exp(-std::abs(x - y)));
}

/// Channel + a priori LLRs for one constituent decoder. Spans alias caller
/// storage; tails are the three termination observations of this encoder.
struct SisoInput {
    std::span<const double> ys;  // systematic LLRs, length K
    std::span<const double> yp;  // parity LLRs, length K
    std::span<const double> la;  // a priori LLRs, length K
    std::array<double, 3> tail_ys{};
    std::array<double, 3> tail_yp{};

    int block_len() const { return static_cast<int>(ys.size()); }
};

struct SisoOutput {
    std::vector<double> posterior;  // L(u_k | y)
    std::vector<double> extrinsic;  // posterior - ys - la
};

/// Branch, forward, and backward metrics for one K+3-stage trellis pass.
/// gamma[t] holds stage t+1's 16 transition metrics (tail stages only use
/// the forced-input subset); alpha[i]/beta[i] sit on stage boundaries, so
/// alpha[0] and beta[K+3] carry the 0 / -128 initializations.
struct TrellisMetrics {
    int block_len = 0;
    std::vector<std::array<double, 16>> gamma;
    std::vector<std::array<double, 8>> alpha;
    std::vector<std::array<double, 8>> beta;

    void resize(int K) {
        block_len = K;
        gamma.assign(K + 3, {});
        alpha.assign(K + 4, {});
        beta.assign(K + 4, {});
    }

    int num_stages() const { return block_len + 3; }
};

/// Winning incoming/outgoing transition per (boundary, state); -1 where a
/// state has no live predecessor. Only meaningful for max-log recursions.
using ArgTable = std::vector<std::array<std::int8_t, 8>>;

namespace detail {
/// gamma for one data stage: 0.5*(u*la + u*ys + p*yp) over all 16
/// transitions, with u, p the bipolar input/parity labels and optional
/// per-term weights (the classic metric is the all-ones case).
inline void stage_gamma(const TrellisSpec& spec, double la, double ys, double yp,
                        const double* w3 /* nullable: la, ys, yp multipliers */,
                        std::array<double, 16>& out) {
    const double wla = w3 ? w3[0] * la : la;
    const double wys = w3 ? w3[1] * ys : ys;
    const double wyp = w3 ? w3[2] * yp : yp;
    for (int t = 0; t < TrellisSpec::kNumTransitions; ++t) {
        const double u = spec.t_bit[t] ? 1.0 : -1.0;
        const double p = spec.t_parity[t] ? 1.0 : -1.0;
        out[t] = 0.5 * (u * (wla + wys) + p * wyp);
    }
}

/// Tail-stage gamma: no a priori term, no weights, forced-input subset only.
inline void tail_gamma(const TrellisSpec& spec, double ys, double yp, std::array<double, 16>& out) {
    out.fill(0.0);
    for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
        const int t = 2 * s + spec.forced_bit[s];
        const double u = spec.t_bit[t] ? 1.0 : -1.0;
        const double p = spec.t_parity[t] ? 1.0 : -1.0;
        out[t] = 0.5 * (u * ys + p * yp);
    }
}
}  // namespace detail

/// Fills metrics.gamma per the unweighted branch metric.
inline void branch_metrics(const SisoInput& in, const TrellisSpec& spec, TrellisMetrics& m) {
    const int K = in.block_len();
    m.resize(K);
    for (int k = 0; k < K; ++k)
        detail::stage_gamma(spec, in.la[k], in.ys[k], in.yp[k], nullptr, m.gamma[k]);
    for (int i = 0; i < 3; ++i)
        detail::tail_gamma(spec, in.tail_ys[i], in.tail_yp[i], m.gamma[K + i]);
}

/// Forward recursion over alpha. Per-stage normalization subtracts the stage
/// maximum (a posterior-neutral shift for the unweighted decoders); the
/// TurboNet path runs unnormalized and records argmax winners instead.
inline void forward_recursion(TrellisMetrics& m, const TrellisSpec& spec, DecodeMode mode,
                              bool normalize = true, ArgTable* winners = nullptr) {
    const int K = m.block_len;
    const int T = m.num_stages();
    if (winners) winners->assign(T + 1, {-1, -1, -1, -1, -1, -1, -1, -1});

    m.alpha[0].fill(kLogZero);
    m.alpha[0][0] = 0.0;
    for (int t = 1; t <= T; ++t) {
        const bool tail = t > K;
        const auto& prev = m.alpha[t - 1];
        const auto& g = m.gamma[t - 1];
        auto& cur = m.alpha[t];
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            const auto& in = tail ? spec.in_tail[s] : spec.in_main[s];
            const int n = tail ? spec.in_tail_count[s] : 2;
            double best = kLogZero;
            std::int8_t arg = -1;
            for (int i = 0; i < n; ++i) {
                const int tr = in[i];
                const double v = prev[spec.t_from[tr]] + g[tr];
                if (mode == DecodeMode::kLogMap) {
                    best = (i == 0) ? v : maxstar(best, v);
                } else if (i == 0 || v > best) {
                    best = v;
                    arg = static_cast<std::int8_t>(tr);
                }
            }
            cur[s] = best;
            if (winners) (*winners)[t][s] = arg;
        }
        if (normalize) {
            const double mx = *std::max_element(cur.begin(), cur.end());
            for (double& v : cur) v -= mx;
        }
    }
}

/// Mirror of the forward pass, from beta[K+3] downwards.
inline void backward_recursion(TrellisMetrics& m, const TrellisSpec& spec, DecodeMode mode,
                               bool normalize = true, ArgTable* winners = nullptr) {
    const int K = m.block_len;
    const int T = m.num_stages();
    if (winners) winners->assign(T + 1, {-1, -1, -1, -1, -1, -1, -1, -1});

    m.beta[T].fill(kLogZero);
    m.beta[T][0] = 0.0;
    for (int t = T; t >= 1; --t) {
        const bool tail = t > K;
        const auto& next = m.beta[t];
        const auto& g = m.gamma[t - 1];
        auto& cur = m.beta[t - 1];
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            double best = kLogZero;
            std::int8_t arg = -1;
            const int n = tail ? 1 : 2;
            for (int i = 0; i < n; ++i) {
                const int tr = tail ? 2 * s + spec.forced_bit[s] : 2 * s + i;
                const double v = next[spec.t_to[tr]] + g[tr];
                if (mode == DecodeMode::kLogMap) {
                    best = (i == 0) ? v : maxstar(best, v);
                } else if (i == 0 || v > best) {
                    best = v;
                    arg = static_cast<std::int8_t>(tr);
                }
            }
            cur[s] = best;
            if (winners) (*winners)[t - 1][s] = arg;
        }
        if (normalize) {
            const double mx = *std::max_element(cur.begin(), cur.end());
            for (double& v : cur) v -= mx;
        }
    }
}

/// Posterior LLRs for the K data bits: the S1-set reduce of
/// alpha + gamma + beta minus the S0-set reduce. Tail stages emit nothing.
inline void posterior_llrs(const TrellisMetrics& m, const TrellisSpec& spec, DecodeMode mode,
                           std::span<double> out) {
    const int K = m.block_len;
    for (int k = 0; k < K; ++k) {
        double acc1 = 0.0, acc0 = 0.0;
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            const int t0 = 2 * s, t1 = 2 * s + 1;
            const double v0 = m.alpha[k][s] + m.gamma[k][t0] + m.beta[k + 1][spec.t_to[t0]];
            const double v1 = m.alpha[k][s] + m.gamma[k][t1] + m.beta[k + 1][spec.t_to[t1]];
            if (mode == DecodeMode::kLogMap) {
                acc0 = (s == 0) ? v0 : maxstar(acc0, v0);
                acc1 = (s == 0) ? v1 : maxstar(acc1, v1);
            } else {
                acc0 = (s == 0) ? v0 : std::max(acc0, v0);
                acc1 = (s == 0) ? v1 : std::max(acc1, v1);
            }
        }
        out[k] = acc1 - acc0;
    }
}

/// One full SISO pass: branch metrics, both recursions, posterior, and the
/// extrinsic LLR (posterior - ys - la).
inline SisoOutput siso_decode(const SisoInput& in, const TrellisSpec& spec, DecodeMode mode,
                              bool normalize = true) {
    const int K = in.block_len();
    TrellisMetrics m;
    branch_metrics(in, spec, m);
    forward_recursion(m, spec, mode, normalize);
    backward_recursion(m, spec, mode, normalize);

    SisoOutput out;
    out.posterior.resize(K);
    out.extrinsic.resize(K);
    posterior_llrs(m, spec, mode, out.posterior);
    for (int k = 0; k < K; ++k) out.extrinsic[k] = out.posterior[k] - in.ys[k] - in.la[k];
    return out;
}

}  // namespace turbolab
