// turbolab command-line interface: encode/decode single codewords, generate
// training data, train TurboNet weights, sweep BER curves, and run the
// small-block oracle equivalence suite.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "turbolab/turbolab.hpp"

namespace {

using nlohmann::json;
using namespace turbolab;

struct GlobalConfig {
    int block_len = 40;
    int qpp_f1 = 3;
    int qpp_f2 = 10;
    bool punctured = false;
    double llr_clamp = 50.0;
    std::uint64_t seed = 1;
    TrainingConfig train;
    int ber_min_errors = 200;
    long long ber_max_frames = 1'000'000;
};

// --config FILE (or $TURBOLAB_CONFIG) is applied before flag parsing so that
// explicit flags always win.
GlobalConfig load_global_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") path = argv[i + 1];
    if (path.empty())
        if (const char* env = std::getenv("TURBOLAB_CONFIG")) path = env;

    GlobalConfig cfg;
    if (path.empty()) return cfg;

    const json j = json::parse(read_text_file(path));
    if (j.contains("code")) {
        const json& c = j.at("code");
        cfg.block_len = c.value("block_len", cfg.block_len);
        cfg.qpp_f1 = c.value("qpp_f1", cfg.qpp_f1);
        cfg.qpp_f2 = c.value("qpp_f2", cfg.qpp_f2);
        cfg.punctured = c.value("punctured", cfg.punctured);
    }
    cfg.llr_clamp = j.value("llr_clamp", cfg.llr_clamp);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("train")) {
        const json& t = j.at("train");
        cfg.train.units = t.value("units", cfg.train.units);
        cfg.train.target_iterations = t.value("target_iterations", cfg.train.target_iterations);
        cfg.train.train_snr_db = t.value("train_snr_db", cfg.train.train_snr_db);
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
        cfg.train.epochs = t.value("epochs", cfg.train.epochs);
        cfg.train.samples_per_epoch = t.value("samples_per_epoch", cfg.train.samples_per_epoch);
        cfg.train.eval_frames = t.value("eval_frames", cfg.train.eval_frames);
        cfg.train.shared_weights = t.value("shared_weights", cfg.train.shared_weights);
    }
    if (j.contains("ber")) {
        const json& b = j.at("ber");
        cfg.ber_min_errors = b.value("min_bit_errors", cfg.ber_min_errors);
        cfg.ber_max_frames = b.value("max_frames", cfg.ber_max_frames);
    }
    return cfg;
}

std::vector<std::uint8_t> parse_bit_string(const std::string& text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw std::invalid_argument(std::string("invalid bit character '") + c + "'");
        }
    }
    return bits;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s += static_cast<char>('0' + b);
    return s;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

int run(int argc, char** argv) {
    GlobalConfig g = load_global_config(argc, argv);

    CLI::App app{"LTE-style turbo coding laboratory with a trainable unrolled max-log-MAP decoder"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (or $TURBOLAB_CONFIG)");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--k", g.block_len, "information block length K");
    app.add_option("--f1", g.qpp_f1, "QPP coefficient f1");
    app.add_option("--f2", g.qpp_f2, "QPP coefficient f2");
    app.add_flag("--punctured,!--unpunctured", g.punctured, "rate-1/2 puncturing");

    // ---- encode ----
    auto* c_enc = app.add_subcommand("encode", "encode a K-bit message to a codeword");
    std::string enc_bits, enc_in, enc_out;
    c_enc->add_option("--bits", enc_bits, "message bits as a 0/1 string");
    c_enc->add_option("--in", enc_in, "file holding the message bits");
    c_enc->add_option("--out", enc_out, "output file (default stdout)");

    // ---- decode ----
    auto* c_dec = app.add_subcommand("decode", "decode a received LLR frame");
    std::string dec_in, dec_out, dec_algo = "max-log-map", dec_weights;
    int dec_iters = 3;
    bool dec_llrs = false;
    c_dec->add_option("--in", dec_in, "JSON file with {\"llrs\": [...]} in on-air order")
        ->required();
    c_dec->add_option("--algo", dec_algo, "log-map | max-log-map | turbonet")
        ->check(CLI::IsMember({"log-map", "max-log-map", "turbonet"}));
    c_dec->add_option("--iters", dec_iters, "decoder iterations");
    c_dec->add_option("--weights", dec_weights, "TurboNet weight file");
    c_dec->add_flag("--llrs", dec_llrs, "also print posterior LLRs");
    c_dec->add_option("--out", dec_out, "output file (default stdout)");

    // ---- gen-data ----
    auto* c_gen = app.add_subcommand("gen-data", "generate a training set");
    int gen_count = 1000;
    double gen_snr = 0.0;
    int gen_titers = 6;
    bool gen_noiseless = false;
    std::string gen_out;
    c_gen->add_option("--count", gen_count, "number of samples");
    c_gen->add_option("--snr", gen_snr, "training Eb/N0 in dB");
    c_gen->add_option("--target-iters", gen_titers, "log-MAP iterations for the targets");
    c_gen->add_flag("--noiseless", gen_noiseless, "clamped noise-free LLRs (testing)");
    c_gen->add_option("--out", gen_out, "output file")->required();

    // ---- train ----
    auto* c_train = app.add_subcommand("train", "train TurboNet weights");
    std::string train_out, train_loss_csv;
    c_train->add_option("--units", g.train.units, "decoding units M");
    c_train->add_option("--target-iters", g.train.target_iterations, "teacher log-MAP iterations");
    c_train->add_option("--train-snr", g.train.train_snr_db, "training Eb/N0 in dB");
    c_train->add_option("--batch", g.train.batch_size, "minibatch size");
    c_train->add_option("--lr", g.train.learning_rate, "ADAM learning rate");
    c_train->add_option("--epochs", g.train.epochs, "training epochs");
    c_train->add_option("--samples", g.train.samples_per_epoch, "samples per epoch");
    c_train->add_option("--eval-frames", g.train.eval_frames, "held-out frames for epoch loss");
    c_train->add_flag("--shared-weights", g.train.shared_weights, "tie the units together");
    c_train->add_option("--out", train_out, "weight file to write")->required();
    c_train->add_option("--loss-csv", train_loss_csv, "per-epoch loss CSV");

    // ---- ber ----
    auto* c_ber = app.add_subcommand("ber", "Monte Carlo BER sweep");
    std::string ber_snr = "0:0.5:3", ber_out, ber_weights;
    std::vector<std::string> ber_algos;
    int ber_iters = 3;
    bool ber_noiseless = false;
    c_ber->add_option("--snr", ber_snr, "start:step:stop range or comma list of Eb/N0 dB");
    c_ber->add_option("--algo", ber_algos, "decoders to compare (repeatable)")
        ->check(CLI::IsMember({"log-map", "max-log-map", "turbonet"}));
    c_ber->add_option("--iters", ber_iters, "iterations for the classic decoders");
    c_ber->add_option("--weights", ber_weights, "TurboNet weight file");
    c_ber->add_option("--errors", g.ber_min_errors, "bit errors per decoder before a point stops");
    c_ber->add_option("--max-frames", g.ber_max_frames, "frame cap per point");
    c_ber->add_flag("--noiseless", ber_noiseless, "noise-free channel (testing)");
    c_ber->add_option("--out", ber_out, "CSV output file (default stdout)");

    // ---- oracle-check ----
    auto* c_oracle = app.add_subcommand("oracle-check", "log-MAP vs exhaustive MAP equivalence");
    int oracle_k = 6, oracle_trials = 50;
    double oracle_tol = 1e-8;
    c_oracle->add_option("--k", oracle_k, "block length (<= 12)");
    c_oracle->add_option("--trials", oracle_trials, "random frames to test");
    c_oracle->add_option("--tol", oracle_tol, "max allowed absolute deviation");

    // ---- params ----
    auto* c_params = app.add_subcommand("params", "count TurboNet parameters");
    std::string params_weights;
    int params_units = 3;
    c_params->add_option("--weights", params_weights, "weight file to count");
    c_params->add_option("--units", params_units, "decoding units M (when no file given)");

    CLI11_PARSE(app, argc, argv);

    const TurboCodeConfig code = make_turbo_config(g.block_len, g.qpp_f1, g.qpp_f2, g.punctured);
    const TrellisSpec& spec = default_trellis();
    g.train.llr_clamp = g.llr_clamp;
    g.train.seed = g.seed;

    if (*c_enc) {
        std::string text = enc_bits;
        if (!enc_in.empty()) text = read_text_file(enc_in);
        if (text.empty()) throw std::invalid_argument("encode: provide --bits or --in");
        const auto u = parse_bit_string(text);
        const Codeword cw = turbo_encode(code, spec, u);
        emit(bits_to_string(cw.flattened) + "\n", enc_out);
        return 0;
    }

    if (*c_dec) {
        const json j = json::parse(read_text_file(dec_in));
        const auto llrs = j.at("llrs").get<std::vector<double>>();
        const LlrFrame frame = depuncture(code, llrs);
        std::vector<std::uint8_t> bits;
        std::vector<double> posteriors;
        if (dec_algo == "turbonet") {
            if (dec_weights.empty())
                throw std::invalid_argument("decode: turbonet needs --weights");
            const LoadedWeights lw = load_weights(dec_weights);
            const TurbonetResult res = turbonet_forward(frame, code, lw.weights, spec);
            bits = res.bits;
            posteriors = res.llrs;
        } else {
            const DecodeMode mode =
                dec_algo == "log-map" ? DecodeMode::kLogMap : DecodeMode::kMaxLogMap;
            const TurboDecodeResult res = turbo_decode(frame, code, dec_iters, mode, spec);
            bits = res.bits;
            posteriors = res.llrs;
        }
        std::ostringstream os;
        os << bits_to_string(bits) << "\n";
        if (dec_llrs) {
            const json out = {{"bits", bits}, {"llrs", posteriors}};
            os.str(out.dump() + "\n");
        }
        emit(os.str(), dec_out);
        return 0;
    }

    if (*c_gen) {
        TrainingConfig tc = g.train;
        tc.train_snr_db = gen_snr;
        tc.target_iterations = gen_titers;
        tc.noiseless = gen_noiseless;
        tc.samples_per_epoch = gen_count;
        const auto samples = generate_training_set(code, spec, tc);
        const json meta = {{"seed", tc.seed},
                           {"snr_db", tc.train_snr_db},
                           {"target_iterations", tc.target_iterations},
                           {"noiseless", tc.noiseless}};
        save_training_set(gen_out, samples, code, meta);
        std::cout << "wrote " << samples.size() << " samples to " << gen_out << "\n";
        return 0;
    }

    if (*c_train) {
        const TrainResult res = train(code, g.train, spec, &std::cout);
        const json meta = {{"seed", g.train.seed},
                           {"train_snr_db", g.train.train_snr_db},
                           {"epochs", g.train.epochs},
                           {"samples_per_epoch", g.train.samples_per_epoch},
                           {"batch_size", g.train.batch_size},
                           {"learning_rate", g.train.learning_rate},
                           {"target_iterations", g.train.target_iterations},
                           {"best_epoch", res.best_epoch},
                           {"best_loss", res.best_loss}};
        save_weights(train_out, res.weights, code, meta);
        if (!train_loss_csv.empty()) {
            std::ostringstream os;
            os.precision(17);
            os << "epoch,loss\n";
            for (std::size_t e = 0; e < res.loss_history.size(); ++e)
                os << e << ',' << res.loss_history[e] << "\n";
            write_text_file(train_loss_csv, os.str());
        }
        std::cout << "best loss " << res.best_loss << " at epoch " << res.best_epoch << ", wrote "
                  << train_out << "\n";
        return 0;
    }

    if (*c_ber) {
        if (ber_algos.empty()) ber_algos = {"max-log-map"};
        LoadedWeights lw;
        bool have_weights = false;
        ExperimentConfig exp;
        exp.code = code;
        exp.snrs_db = parse_snr_range(ber_snr);
        exp.min_bit_errors = g.ber_min_errors;
        exp.max_frames = g.ber_max_frames;
        exp.seed = g.seed;
        exp.llr_clamp = g.llr_clamp;
        exp.noiseless = ber_noiseless;
        for (const std::string& a : ber_algos) {
            DecoderChoice d;
            d.iterations = ber_iters;
            if (a == "log-map") {
                d.kind = DecoderChoice::Kind::kLogMap;
            } else if (a == "max-log-map") {
                d.kind = DecoderChoice::Kind::kMaxLogMap;
            } else {
                if (ber_weights.empty()) throw std::invalid_argument("ber: turbonet needs --weights");
                if (!have_weights) {
                    lw = load_weights(ber_weights);
                    have_weights = true;
                }
                d.kind = DecoderChoice::Kind::kTurboNet;
                d.weights = &lw.weights;
            }
            exp.decoders.push_back(d);
        }
        const BerReport report = ber_simulate(exp, spec);
        emit(ber_report_to_csv(report), ber_out);
        if (!ber_out.empty()) std::cout << "wrote " << ber_out << "\n";
        if (exp.decoders.size() > 1) {
            std::cout << "pairwise BER ratios (a/b with 95% CI):\n";
            for (const ComparisonRow& c : compare_decoders(report)) {
                std::ostringstream os;
                os.precision(4);
                os << "  snr " << c.snr_db << "  " << c.decoder_a << " / " << c.decoder_b << " = "
                   << c.ratio << "  [" << c.ci_low << ", " << c.ci_high << "]";
                std::cout << os.str() << "\n";
            }
        }
        return 0;
    }

    if (*c_oracle) {
        Rng rng(mix_seed(g.seed, 0x4f52, 0));
        double max_dev = 0.0;
        for (int trial = 0; trial < oracle_trials; ++trial) {
            std::vector<double> ys(oracle_k), yp(oracle_k), la(oracle_k);
            std::array<double, 3> tys{}, typ{};
            for (int k = 0; k < oracle_k; ++k) {
                ys[k] = 2.0 * rng.gaussian();
                yp[k] = 2.0 * rng.gaussian();
                la[k] = 2.0 * rng.gaussian();
            }
            for (int i = 0; i < 3; ++i) {
                tys[i] = 2.0 * rng.gaussian();
                typ[i] = 2.0 * rng.gaussian();
            }
            const SisoInput in{ys, yp, la, tys, typ};
            const SisoOutput out = siso_decode(in, spec, DecodeMode::kLogMap);
            const std::vector<double> oracle = exhaustive_map_oracle(in, spec);
            for (int k = 0; k < oracle_k; ++k)
                max_dev = std::max(max_dev, std::abs(out.posterior[k] - oracle[k]));
        }
        std::cout << "oracle-check: k=" << oracle_k << " trials=" << oracle_trials
                  << " max deviation " << max_dev << " (tol " << oracle_tol << ")\n";
        return max_dev < oracle_tol ? 0 : 1;
    }

    if (*c_params) {
        std::size_t count;
        if (!params_weights.empty()) {
            count = count_parameters(load_weights(params_weights).weights);
        } else {
            count = count_parameters(WeightSet::ones(params_units, g.block_len));
        }
        std::cout << count << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
}
