#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "turbolab/llr_frame.hpp"
#include "turbolab/siso.hpp"
#include "turbolab/turbo_code.hpp"
#include "turbolab/turbo_decoder.hpp"

namespace turbolab {

/// Weight layout per trellis position: 12 doubles, indexed as below. The
/// first three scale the branch-metric terms, the middle six the posterior
/// max-terms (S1 then S0, each alpha/gamma/beta), the last three the
/// extrinsic combination. All-ones reproduces plain max-log-MAP.
enum WeightIndex : int {
    kWGammaLa = 0,
    kWGammaYs = 1,
    kWGammaYp = 2,
    kWPostS1Alpha = 3,
    kWPostS1Gamma = 4,
    kWPostS1Beta = 5,
    kWPostS0Alpha = 6,
    kWPostS0Gamma = 7,
    kWPostS0Beta = 8,
    kWExtPosterior = 9,
    kWExtYs = 10,
    kWExtLa = 11,
};
inline constexpr int kWeightsPerPosition = 12;

/// All trainable parameters: M units x 2 subnets x K positions x 12.
/// Stored flat in unit-major order so the optimizer and the weight file
/// see one well-defined sequence.
struct WeightSet {
    int units = 0;      // M
    int block_len = 0;  // K
    std::vector<double> values;

    static WeightSet filled(int units, int block_len, double value) {
        WeightSet w;
        w.units = units;
        w.block_len = block_len;
        w.values.assign(static_cast<std::size_t>(units) * 2 * block_len * kWeightsPerPosition,
                        value);
        return w;
    }
    static WeightSet ones(int units, int block_len) { return filled(units, block_len, 1.0); }
    static WeightSet zeros(int units, int block_len) { return filled(units, block_len, 0.0); }

    std::size_t count() const { return values.size(); }

    std::size_t subnet_offset(int m, int d) const {
        return (static_cast<std::size_t>(m) * 2 + d) * block_len * kWeightsPerPosition;
    }
    const double* subnet(int m, int d) const { return values.data() + subnet_offset(m, d); }
    double* subnet(int m, int d) { return values.data() + subnet_offset(m, d); }

    double& at(int m, int d, int k, int j) {
        return values[subnet_offset(m, d) + static_cast<std::size_t>(k) * kWeightsPerPosition + j];
    }
    double at(int m, int d, int k, int j) const {
        return values[subnet_offset(m, d) + static_cast<std::size_t>(k) * kWeightsPerPosition + j];
    }
};

/// Everything one subnet pass computed, kept for the reverse pass: metric
/// tables, argmax routing of every max node, and the subnet's own inputs
/// and outputs.
struct SisoTape {
    TrellisMetrics metrics;
    ArgTable alpha_arg;  // winner feeding alpha[i][s]
    ArgTable beta_arg;   // winner feeding beta[i][s]
    std::vector<std::int8_t> post_arg1, post_arg0;
    std::vector<double> la;  // a priori input, copied
    std::vector<double> posterior;
    std::vector<double> extrinsic;
};

struct TurbonetTrace {
    std::vector<std::array<SisoTape, 2>> units;
    std::vector<double> final_llrs;
};

struct TurbonetResult {
    std::vector<double> llrs;     // deinterleaved L^M(u|y)
    std::vector<double> outputs;  // o_k = sigmoid(llr)
    std::vector<std::uint8_t> bits;
};

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// Branch metrics with the per-position multiplicative weights; tail stages
/// stay unweighted (they carry no trainable index).
inline void weighted_branch_metrics(const SisoInput& in, const TrellisSpec& spec,
                                    const double* w, TrellisMetrics& m) {
    const int K = in.block_len();
    m.resize(K);
    for (int k = 0; k < K; ++k)
        detail::stage_gamma(spec, in.la[k], in.ys[k], in.yp[k],
                            w + k * kWeightsPerPosition + kWGammaLa, m.gamma[k]);
    for (int i = 0; i < 3; ++i)
        detail::tail_gamma(spec, in.tail_ys[i], in.tail_yp[i], m.gamma[K + i]);
}

/// Posterior with separately weighted alpha/gamma/beta terms in each max.
/// The metrics must come from the unweighted (and unnormalized) recursions.
inline void weighted_posterior(const TrellisMetrics& m, const TrellisSpec& spec, const double* w,
                               std::span<double> out, std::vector<std::int8_t>* arg1 = nullptr,
                               std::vector<std::int8_t>* arg0 = nullptr) {
    const int K = m.block_len;
    if (arg1) arg1->assign(K, -1);
    if (arg0) arg0->assign(K, -1);
    for (int k = 0; k < K; ++k) {
        const double* wk = w + k * kWeightsPerPosition;
        double best1 = 0.0, best0 = 0.0;
        int a1 = -1, a0 = -1;
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            const int t0 = 2 * s, t1 = 2 * s + 1;
            const double v1 = wk[kWPostS1Alpha] * m.alpha[k][s] +
                              wk[kWPostS1Gamma] * m.gamma[k][t1] +
                              wk[kWPostS1Beta] * m.beta[k + 1][spec.t_to[t1]];
            const double v0 = wk[kWPostS0Alpha] * m.alpha[k][s] +
                              wk[kWPostS0Gamma] * m.gamma[k][t0] +
                              wk[kWPostS0Beta] * m.beta[k + 1][spec.t_to[t0]];
            if (s == 0 || v1 > best1) {
                best1 = v1;
                a1 = t1;
            }
            if (s == 0 || v0 > best0) {
                best0 = v0;
                a0 = t0;
            }
        }
        out[k] = best1 - best0;
        if (arg1) (*arg1)[k] = static_cast<std::int8_t>(a1);
        if (arg0) (*arg0)[k] = static_cast<std::int8_t>(a0);
    }
}

/// Weighted extrinsic: w1*posterior - w2*ys - w3*la.
inline void weighted_extrinsic(std::span<const double> posterior, std::span<const double> ys,
                               std::span<const double> la, const double* w, std::span<double> out) {
    for (std::size_t k = 0; k < posterior.size(); ++k) {
        const double* wk = w + k * kWeightsPerPosition;
        out[k] = wk[kWExtPosterior] * posterior[k] - wk[kWExtYs] * ys[k] - wk[kWExtLa] * la[k];
    }
}

namespace detail {

inline void turbonet_subnet(const SisoInput& in, const TrellisSpec& spec, const double* w,
                            SisoTape& tape) {
    const int K = in.block_len();
    weighted_branch_metrics(in, spec, w, tape.metrics);
    // No trainable weights and no normalization inside the recursions: the
    // weighted posterior is not invariant to per-stage shifts, so the tables
    // keep their raw values.
    forward_recursion(tape.metrics, spec, DecodeMode::kMaxLogMap, false, &tape.alpha_arg);
    backward_recursion(tape.metrics, spec, DecodeMode::kMaxLogMap, false, &tape.beta_arg);
    tape.posterior.resize(K);
    weighted_posterior(tape.metrics, spec, w, tape.posterior, &tape.post_arg1, &tape.post_arg0);
    tape.extrinsic.resize(K);
    weighted_extrinsic(tape.posterior, in.ys, in.la, w, tape.extrinsic);
    tape.la.assign(in.la.begin(), in.la.end());
}

}  // namespace detail

/// Unrolled decoder: M units of (subnet 1 in natural order, subnet 2 in
/// interleaved order), a priori chain starting at zero, final output the
/// last subnet's posterior rather than its extrinsic.
inline TurbonetResult turbonet_forward(const LlrFrame& frame, const TurboCodeConfig& cfg,
                                       const WeightSet& weights,
                                       const TrellisSpec& spec = default_trellis(),
                                       TurbonetTrace* trace = nullptr) {
    const int K = cfg.block_len;
    const int M = weights.units;
    if (M < 1 || weights.block_len != K ||
        weights.values.size() != static_cast<std::size_t>(M) * 2 * K * kWeightsPerPosition)
        throw std::invalid_argument("turbonet_forward: weight shape does not match config");
    if (static_cast<int>(frame.ys.size()) != K)
        throw std::invalid_argument("turbonet_forward: frame length != K");

    TurbonetTrace local;
    TurbonetTrace& tr = trace ? *trace : local;
    tr.units.resize(M);

    const std::vector<double> ys_int = qpp_interleave(cfg, frame.ys);
    std::vector<double> la(K, 0.0);
    for (int m = 0; m < M; ++m) {
        SisoTape& t1 = tr.units[m][0];
        detail::turbonet_subnet({frame.ys, frame.y1p, la, frame.tail1_sys, frame.tail1_par}, spec,
                                weights.subnet(m, 0), t1);
        const std::vector<double> la2 = qpp_interleave(cfg, t1.extrinsic);
        SisoTape& t2 = tr.units[m][1];
        detail::turbonet_subnet({ys_int, frame.y2p, la2, frame.tail2_sys, frame.tail2_par}, spec,
                                weights.subnet(m, 1), t2);
        if (m + 1 < M) la = qpp_deinterleave(cfg, t2.extrinsic);
    }
    tr.final_llrs = qpp_deinterleave(cfg, tr.units[M - 1][1].posterior);

    TurbonetResult res;
    res.llrs = tr.final_llrs;
    res.outputs.resize(K);
    res.bits.resize(K);
    for (int k = 0; k < K; ++k) {
        res.outputs[k] = sigmoid(res.llrs[k]);
        res.bits[k] = res.llrs[k] >= 0.0 ? 1 : 0;
    }
    return res;
}

/// Mean squared error between the network posterior and the log-MAP target.
inline double turbonet_loss(std::span<const double> llrs, std::span<const double> target) {
    if (llrs.size() != target.size())
        throw std::invalid_argument("turbonet_loss: size mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < llrs.size(); ++k) {
        const double d = llrs[k] - target[k];
        acc += d * d;
    }
    return acc / static_cast<double>(llrs.size());
}

namespace detail {

/// Reverse pass over one recorded subnet. d_ext is the gradient on the
/// extrinsic output, d_post_direct an extra gradient applied straight to the
/// posterior (the last subnet's path to the loss). Weight gradients are
/// accumulated into gw; the return value is the gradient on the a priori
/// input, which keeps the chain moving toward earlier units.
///
/// Max nodes route their gradient entirely to the recorded argmax operand;
/// ties were broken toward the first operand during the forward pass.
inline std::vector<double> turbonet_subnet_backward(
    const SisoTape& tape, const TrellisSpec& spec, std::span<const double> ys,
    std::span<const double> yp, const double* w, double* gw, std::span<const double> d_ext,
    std::span<const double> d_post_direct) {
    const int K = tape.metrics.block_len;
    const int T = tape.metrics.num_stages();
    const auto& m = tape.metrics;

    std::vector<double> d_la(K, 0.0);
    std::vector<std::array<double, 8>> d_alpha(T + 1, std::array<double, 8>{});
    std::vector<std::array<double, 8>> d_beta(T + 1, std::array<double, 8>{});
    std::vector<std::array<double, 16>> d_gamma(T, std::array<double, 16>{});

    // Extrinsic and posterior nodes.
    for (int k = 0; k < K; ++k) {
        const double* wk = w + k * kWeightsPerPosition;
        double* gk = gw + k * kWeightsPerPosition;
        double d_post = d_post_direct.empty() ? 0.0 : d_post_direct[k];
        if (!d_ext.empty() && d_ext[k] != 0.0) {
            const double g = d_ext[k];
            gk[kWExtPosterior] += g * tape.posterior[k];
            gk[kWExtYs] -= g * ys[k];
            gk[kWExtLa] -= g * tape.la[k];
            d_la[k] -= g * wk[kWExtLa];
            d_post += g * wk[kWExtPosterior];
        }
        if (d_post == 0.0) continue;

        const int t1 = tape.post_arg1[k], t0 = tape.post_arg0[k];
        const int s1 = spec.t_from[t1], s0 = spec.t_from[t0];
        const int e1 = spec.t_to[t1], e0 = spec.t_to[t0];
        gk[kWPostS1Alpha] += d_post * m.alpha[k][s1];
        gk[kWPostS1Gamma] += d_post * m.gamma[k][t1];
        gk[kWPostS1Beta] += d_post * m.beta[k + 1][e1];
        d_alpha[k][s1] += d_post * wk[kWPostS1Alpha];
        d_gamma[k][t1] += d_post * wk[kWPostS1Gamma];
        d_beta[k + 1][e1] += d_post * wk[kWPostS1Beta];

        gk[kWPostS0Alpha] -= d_post * m.alpha[k][s0];
        gk[kWPostS0Gamma] -= d_post * m.gamma[k][t0];
        gk[kWPostS0Beta] -= d_post * m.beta[k + 1][e0];
        d_alpha[k][s0] -= d_post * wk[kWPostS0Alpha];
        d_gamma[k][t0] -= d_post * wk[kWPostS0Gamma];
        d_beta[k + 1][e0] -= d_post * wk[kWPostS0Beta];
    }

    // beta[i][s] = beta[i+1][to] + gamma[i][tr]: push gradients toward the
    // final boundary, accumulating each level before moving past it.
    for (int i = 0; i < T; ++i) {
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            const double g = d_beta[i][s];
            if (g == 0.0) continue;
            const int tr = tape.beta_arg[i][s];
            if (tr < 0) continue;
            d_beta[i + 1][spec.t_to[tr]] += g;
            d_gamma[i][tr] += g;
        }
    }
    // alpha[i][s] = alpha[i-1][from] + gamma[i-1][tr], mirrored direction.
    for (int i = T; i >= 1; --i) {
        for (int s = 0; s < TrellisSpec::kNumStates; ++s) {
            const double g = d_alpha[i][s];
            if (g == 0.0) continue;
            const int tr = tape.alpha_arg[i][s];
            if (tr < 0) continue;
            d_alpha[i - 1][spec.t_from[tr]] += g;
            d_gamma[i - 1][tr] += g;
        }
    }

    // Branch-metric weights; tail stages carry none.
    for (int k = 0; k < K; ++k) {
        const double* wk = w + k * kWeightsPerPosition;
        double* gk = gw + k * kWeightsPerPosition;
        for (int tr = 0; tr < TrellisSpec::kNumTransitions; ++tr) {
            const double dg = d_gamma[k][tr];
            if (dg == 0.0) continue;
            const double u = spec.t_bit[tr] ? 1.0 : -1.0;
            const double p = spec.t_parity[tr] ? 1.0 : -1.0;
            gk[kWGammaLa] += dg * 0.5 * u * tape.la[k];
            gk[kWGammaYs] += dg * 0.5 * u * ys[k];
            gk[kWGammaYp] += dg * 0.5 * p * yp[k];
            d_la[k] += dg * 0.5 * u * wk[kWGammaLa];
        }
    }
    return d_la;
}

}  // namespace detail

/// Exact reverse-mode gradient of the loss with respect to every weight,
/// given a recorded forward trace.
inline WeightSet turbonet_backward(const TurbonetTrace& trace, const LlrFrame& frame,
                                   const TurboCodeConfig& cfg, const WeightSet& weights,
                                   std::span<const double> target,
                                   const TrellisSpec& spec = default_trellis(),
                                   double* loss_out = nullptr) {
    const int K = cfg.block_len;
    const int M = weights.units;
    if (static_cast<int>(trace.units.size()) != M || trace.final_llrs.empty())
        throw std::invalid_argument("turbonet_backward: trace does not match weights");
    if (static_cast<int>(target.size()) != K)
        throw std::invalid_argument("turbonet_backward: target length != K");

    WeightSet grads = WeightSet::zeros(M, K);
    if (loss_out) *loss_out = turbonet_loss(trace.final_llrs, target);

    std::vector<double> d_llr(K);
    for (int k = 0; k < K; ++k)
        d_llr[k] = 2.0 / static_cast<double>(K) * (trace.final_llrs[k] - target[k]);

    const std::vector<double> ys_int = qpp_interleave(cfg, frame.ys);
    const std::vector<double> d_post_last = qpp_interleave(cfg, d_llr);
    const std::span<const double> empty;

    std::vector<double> d_la_next;  // gradient on unit m+1's a priori input
    for (int m = M - 1; m >= 0; --m) {
        // e2 feeds the next unit through a deinterleave; the last unit's
        // posterior feeds the loss through the final deinterleave instead.
        const std::vector<double> d_ext2 =
            (m == M - 1) ? std::vector<double>(K, 0.0) : qpp_interleave(cfg, d_la_next);
        std::vector<double> d_la2 = detail::turbonet_subnet_backward(
            trace.units[m][1], spec, ys_int, frame.y2p, weights.subnet(m, 1), grads.subnet(m, 1),
            d_ext2, (m == M - 1) ? std::span<const double>(d_post_last) : empty);
        // la2 = interleave(e1)
        const std::vector<double> d_ext1 = qpp_deinterleave(cfg, d_la2);
        d_la_next = detail::turbonet_subnet_backward(trace.units[m][0], spec, frame.ys, frame.y1p,
                                                     weights.subnet(m, 0), grads.subnet(m, 0),
                                                     d_ext1, empty);
    }
    // d_la_next now sits on the all-zero initial prior, a constant.
    return grads;
}

/// Forward + backward in one call; gradients are added into grad_accum so a
/// minibatch can share one accumulator. Returns the sample loss.
inline double turbonet_loss_and_grad(const LlrFrame& frame, const TurboCodeConfig& cfg,
                                     const WeightSet& weights, std::span<const double> target,
                                     WeightSet& grad_accum,
                                     const TrellisSpec& spec = default_trellis()) {
    TurbonetTrace trace;
    turbonet_forward(frame, cfg, weights, spec, &trace);
    double loss = 0.0;
    const WeightSet g = turbonet_backward(trace, frame, cfg, weights, target, spec, &loss);
    for (std::size_t i = 0; i < g.values.size(); ++i) grad_accum.values[i] += g.values[i];
    return loss;
}

/// Concatenated argmax decisions of every max node in the trace. Two traces
/// with equal signatures followed the same piecewise-linear branch, which is
/// what qualifies a coordinate for finite-difference comparison.
inline std::vector<std::int8_t> routing_signature(const TurbonetTrace& trace) {
    std::vector<std::int8_t> sig;
    for (const auto& unit : trace.units) {
        for (const SisoTape& tape : unit) {
            for (const auto& row : tape.alpha_arg) sig.insert(sig.end(), row.begin(), row.end());
            for (const auto& row : tape.beta_arg) sig.insert(sig.end(), row.begin(), row.end());
            sig.insert(sig.end(), tape.post_arg1.begin(), tape.post_arg1.end());
            sig.insert(sig.end(), tape.post_arg0.begin(), tape.post_arg0.end());
        }
    }
    return sig;
}

}  // namespace turbolab
