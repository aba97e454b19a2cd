#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "turbolab/adam.hpp"
#include "turbolab/channel.hpp"
#include "turbolab/rng.hpp"
#include "turbolab/turbo_code.hpp"
#include "turbolab/turbo_decoder.hpp"
#include "turbolab/turbonet.hpp"

namespace turbolab {

// Stream tags feeding mix_seed so the data, eval, shuffle, and BER draws
// never overlap.
inline constexpr std::uint64_t kStreamTrainingData = 0x545244;
inline constexpr std::uint64_t kStreamEvalData = 0x45564c;
inline constexpr std::uint64_t kStreamShuffle = 0x534846;
inline constexpr std::uint64_t kStreamBer = 0x424552;

struct TrainingConfig {
    int units = 3;              // M decoding units
    int target_iterations = 6;  // T iterations of the log-MAP teacher
    double train_snr_db = 0.0;
    int batch_size = 500;
    double learning_rate = 1e-5;
    int epochs = 10;
    int samples_per_epoch = 20000;  // dataset size; one epoch is one pass
    int eval_frames = 2000;
    std::uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double llr_clamp = 50.0;
    bool shared_weights = false;  // ablation: tie the M units together
    bool noiseless = false;       // test override: clamped LLRs, no noise
};

struct TrainingSample {
    LlrFrame frame;
    std::vector<double> target_llrs;      // log-MAP(T) posterior, natural order
    std::vector<std::uint8_t> true_bits;  // for BER monitoring only
};

inline TrainingSample make_training_sample(const TurboCodeConfig& code, const TrellisSpec& spec,
                                           double snr_db, double llr_clamp, int target_iterations,
                                           bool noiseless, Rng& rng) {
    std::vector<std::uint8_t> u(code.block_len);
    for (auto& b : u) b = static_cast<std::uint8_t>(rng.bit());
    const Codeword cw = turbo_encode(code, spec, u);

    std::vector<double> llrs;
    if (noiseless) {
        llrs = noiseless_llrs(cw.flattened, llr_clamp);
    } else {
        ChannelConfig ch;
        ch.snr_db = snr_db;
        ch.rate = code.rate();
        ch.llr_clamp = llr_clamp;
        llrs = llr_demap(awgn(bpsk_modulate(cw.flattened), ch, rng), ch);
    }

    TrainingSample s;
    s.frame = depuncture(code, llrs);
    s.target_llrs = turbo_decode(s.frame, code, target_iterations, DecodeMode::kLogMap, spec).llrs;
    s.true_bits = std::move(u);
    return s;
}

/// Seeded dataset: sample i depends only on (seed, stream, i), so the set is
/// byte-identical across runs and machines.
inline std::vector<TrainingSample> generate_training_set(const TurboCodeConfig& code,
                                                         const TrellisSpec& spec,
                                                         const TrainingConfig& cfg, int count,
                                                         std::uint64_t stream) {
    std::vector<TrainingSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng rng(mix_seed(cfg.seed, stream, static_cast<std::uint64_t>(i)));
        out.push_back(make_training_sample(code, spec, cfg.train_snr_db, cfg.llr_clamp,
                                           cfg.target_iterations, cfg.noiseless, rng));
    }
    return out;
}

inline std::vector<TrainingSample> generate_training_set(const TurboCodeConfig& code,
                                                         const TrellisSpec& spec,
                                                         const TrainingConfig& cfg) {
    return generate_training_set(code, spec, cfg, cfg.samples_per_epoch, kStreamTrainingData);
}

inline double mean_loss(const std::vector<TrainingSample>& samples, const TurboCodeConfig& code,
                        const WeightSet& weights, const TrellisSpec& spec) {
    double acc = 0.0;
    for (const TrainingSample& s : samples)
        acc += turbonet_loss(turbonet_forward(s.frame, code, weights, spec).llrs, s.target_llrs);
    return acc / static_cast<double>(samples.size());
}

/// Ties the units together by writing each coordinate's cross-unit gradient
/// sum back to every unit. With identical initial weights and moments this
/// keeps all units equal after every ADAM step.
inline void share_gradients_across_units(WeightSet& g) {
    const std::size_t per_unit =
        static_cast<std::size_t>(2) * g.block_len * kWeightsPerPosition;
    for (std::size_t off = 0; off < per_unit; ++off) {
        double sum = 0.0;
        for (int m = 0; m < g.units; ++m) sum += g.values[m * per_unit + off];
        for (int m = 0; m < g.units; ++m) g.values[m * per_unit + off] = sum;
    }
}

struct TrainResult {
    WeightSet weights;                 // best held-out loss seen
    std::vector<double> loss_history;  // [0] = all-ones baseline, then per epoch
    int best_epoch = 0;                // 0 means the untouched baseline won
    double best_loss = 0.0;
};

/// Minibatch ADAM on the LLR-matching loss, starting from all-ones weights
/// (the max-log-MAP baseline). Held-out loss is evaluated after each epoch
/// and the best weights are returned.
inline TrainResult train(const TurboCodeConfig& code, const TrainingConfig& cfg,
                         const TrellisSpec& spec = default_trellis(),
                         std::ostream* log = nullptr) {
    if (cfg.units < 1 || cfg.target_iterations < 1 || cfg.batch_size < 1)
        throw std::invalid_argument("train: units, target_iterations, batch_size must be >= 1");
    const int K = code.block_len;

    const std::vector<TrainingSample> data = generate_training_set(code, spec, cfg);
    const std::vector<TrainingSample> eval =
        generate_training_set(code, spec, cfg, cfg.eval_frames, kStreamEvalData);

    TrainResult res;
    WeightSet weights = WeightSet::ones(cfg.units, K);
    AdamState adam = make_adam_state(cfg.units, K);

    const double baseline = mean_loss(eval, code, weights, spec);
    res.loss_history.push_back(baseline);
    res.weights = weights;
    res.best_loss = baseline;
    res.best_epoch = 0;
    if (log) *log << "epoch 0 eval_loss " << baseline << " (all-ones baseline)\n";

    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, kStreamShuffle, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.engine()() % i]);

        WeightSet grad = WeightSet::zeros(cfg.units, K);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            grad.values.assign(grad.values.size(), 0.0);
            for (std::size_t i = start; i < end; ++i) {
                const TrainingSample& s = data[order[i]];
                const double loss =
                    turbonet_loss_and_grad(s.frame, code, weights, s.target_llrs, grad, spec);
                if (!std::isfinite(loss))
                    throw std::runtime_error("train: loss diverged (non-finite sample loss)");
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (double& v : grad.values) v *= inv;
            if (cfg.shared_weights) share_gradients_across_units(grad);
            adam_step(weights, grad, adam, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2,
                      cfg.adam_eps);
        }

        const double el = mean_loss(eval, code, weights, spec);
        if (!std::isfinite(el)) throw std::runtime_error("train: eval loss diverged");
        res.loss_history.push_back(el);
        if (el < res.best_loss) {
            res.best_loss = el;
            res.best_epoch = epoch;
            res.weights = weights;
        }
        if (log) *log << "epoch " << epoch << " eval_loss " << el << "\n";
    }
    return res;
}

}  // namespace turbolab
