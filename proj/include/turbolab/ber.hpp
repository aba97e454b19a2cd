#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "turbolab/channel.hpp"
#include "turbolab/rng.hpp"
#include "turbolab/training.hpp"
#include "turbolab/turbo_code.hpp"
#include "turbolab/turbo_decoder.hpp"
#include "turbolab/turbonet.hpp"

namespace turbolab {

/// One decoder entry of a sweep: a classic algorithm with an iteration
/// count, or TurboNet with a weight set.
struct DecoderChoice {
    enum class Kind { kLogMap, kMaxLogMap, kTurboNet };
    Kind kind = Kind::kMaxLogMap;
    int iterations = 3;                 // ignored for TurboNet (M comes with the weights)
    const WeightSet* weights = nullptr;

    std::string label() const {
        switch (kind) {
            case Kind::kLogMap: return "log-map:" + std::to_string(iterations);
            case Kind::kMaxLogMap: return "max-log-map:" + std::to_string(iterations);
            case Kind::kTurboNet:
                return "turbonet:" + std::to_string(weights ? weights->units : 0);
        }
        return "?";
    }
};

struct ExperimentConfig {
    TurboCodeConfig code;
    std::vector<double> snrs_db;
    std::vector<DecoderChoice> decoders;
    int min_bit_errors = 200;         // per decoder, before a point may stop
    long long max_frames = 1'000'000; // hard cap per point
    std::uint64_t seed = 1;
    double llr_clamp = 50.0;
    bool noiseless = false;  // test override
};

struct BerRow {
    double snr_db = 0.0;
    std::string decoder;
    long long frames = 0;
    long long bits = 0;
    long long bit_errors = 0;
    long long frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
};

struct BerReport {
    std::vector<BerRow> rows;
    std::string config_fingerprint;
    std::uint64_t seed = 0;
};

/// "0:0.5:3" (start:step:stop, inclusive) or a comma list like "0,1,2.5".
inline std::vector<double> parse_snr_range(const std::string& spec) {
    std::vector<double> snrs;
    if (spec.find(':') != std::string::npos) {
        double start, step, stop;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw std::invalid_argument("bad SNR range, expected start:step:stop");
        for (double v = start; v <= stop + 1e-9; v += step) snrs.push_back(v);
    } else {
        std::istringstream is(spec);
        std::string tok;
        while (std::getline(is, tok, ',')) snrs.push_back(std::stod(tok));
    }
    if (snrs.empty()) throw std::invalid_argument("empty SNR list");
    return snrs;
}

namespace detail {
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}
}  // namespace detail

inline std::string experiment_fingerprint(const ExperimentConfig& exp) {
    std::ostringstream os;
    os << exp.code.block_len << '/' << exp.code.qpp_f1 << '/' << exp.code.qpp_f2 << '/'
       << exp.code.punctured << '/' << exp.min_bit_errors << '/' << exp.max_frames << '/'
       << exp.noiseless << '/';
    for (double s : exp.snrs_db) os << s << ',';
    os << '/';
    for (const auto& d : exp.decoders) os << d.label() << ',';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(os.str())));
    return buf;
}

/// Monte Carlo sweep. Every decoder sees the identical noise realization of
/// each frame (paired comparison); frame f of SNR point i draws its noise
/// from mix_seed(seed, i, f), so results do not depend on scheduling. A
/// point stops once every decoder has min_bit_errors or at the frame cap.
inline BerReport ber_simulate(const ExperimentConfig& exp,
                              const TrellisSpec& spec = default_trellis()) {
    if (exp.snrs_db.empty()) throw std::invalid_argument("ber_simulate: empty SNR list");
    if (exp.decoders.empty()) throw std::invalid_argument("ber_simulate: no decoders");
    if (exp.min_bit_errors < 1 || exp.max_frames < 1)
        throw std::invalid_argument("ber_simulate: stopping rule must be positive");
    for (const auto& d : exp.decoders)
        if (d.kind == DecoderChoice::Kind::kTurboNet &&
            (d.weights == nullptr || d.weights->block_len != exp.code.block_len))
            throw std::invalid_argument("ber_simulate: TurboNet decoder needs matching weights");

    const int K = exp.code.block_len;
    const std::size_t nd = exp.decoders.size();
    BerReport report;
    report.seed = exp.seed;
    report.config_fingerprint = experiment_fingerprint(exp);

    for (std::size_t si = 0; si < exp.snrs_db.size(); ++si) {
        ChannelConfig ch;
        ch.snr_db = exp.snrs_db[si];
        ch.rate = exp.code.rate();
        ch.llr_clamp = exp.llr_clamp;

        std::vector<long long> bit_errors(nd, 0), frame_errors(nd, 0);
        long long frames = 0;
        while (frames < exp.max_frames) {
            Rng rng(mix_seed(exp.seed, kStreamBer + si, static_cast<std::uint64_t>(frames)));
            std::vector<std::uint8_t> u(K);
            for (auto& b : u) b = static_cast<std::uint8_t>(rng.bit());
            const Codeword cw = turbo_encode(exp.code, spec, u);
            const std::vector<double> llrs =
                exp.noiseless ? noiseless_llrs(cw.flattened, exp.llr_clamp)
                              : llr_demap(awgn(bpsk_modulate(cw.flattened), ch, rng), ch);
            const LlrFrame frame = depuncture(exp.code, llrs);

            for (std::size_t di = 0; di < nd; ++di) {
                const DecoderChoice& dc = exp.decoders[di];
                std::vector<std::uint8_t> bits;
                switch (dc.kind) {
                    case DecoderChoice::Kind::kLogMap:
                        bits = turbo_decode(frame, exp.code, dc.iterations, DecodeMode::kLogMap,
                                            spec)
                                   .bits;
                        break;
                    case DecoderChoice::Kind::kMaxLogMap:
                        bits = turbo_decode(frame, exp.code, dc.iterations,
                                            DecodeMode::kMaxLogMap, spec)
                                   .bits;
                        break;
                    case DecoderChoice::Kind::kTurboNet:
                        bits = turbonet_forward(frame, exp.code, *dc.weights, spec).bits;
                        break;
                }
                int errs = 0;
                for (int k = 0; k < K; ++k) errs += bits[k] != u[k];
                bit_errors[di] += errs;
                frame_errors[di] += errs > 0;
            }
            ++frames;

            bool done = true;
            for (std::size_t di = 0; di < nd; ++di)
                done = done && bit_errors[di] >= exp.min_bit_errors;
            if (done) break;
        }

        for (std::size_t di = 0; di < nd; ++di) {
            BerRow row;
            row.snr_db = exp.snrs_db[si];
            row.decoder = exp.decoders[di].label();
            row.frames = frames;
            row.bits = frames * K;
            row.bit_errors = bit_errors[di];
            row.frame_errors = frame_errors[di];
            row.ber = static_cast<double>(row.bit_errors) / static_cast<double>(row.bits);
            row.fer = static_cast<double>(row.frame_errors) / static_cast<double>(row.frames);
            report.rows.push_back(row);
        }
    }
    return report;
}

/// Pairwise BER ratios with a delta-method confidence interval on the ratio
/// (Poisson error counts); ratio 1.0 exactly when the counts coincide.
struct ComparisonRow {
    double snr_db = 0.0;
    std::string decoder_a, decoder_b;
    double ratio = 1.0;  // ber_a / ber_b
    double ci_low = 0.0, ci_high = 0.0;
};

inline std::vector<ComparisonRow> compare_decoders(const BerReport& report) {
    std::vector<ComparisonRow> out;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < report.rows.size(); ++j) {
            const BerRow& a = report.rows[i];
            const BerRow& b = report.rows[j];
            if (a.snr_db != b.snr_db) continue;
            ComparisonRow c;
            c.snr_db = a.snr_db;
            c.decoder_a = a.decoder;
            c.decoder_b = b.decoder;
            if (a.bit_errors == b.bit_errors) {
                c.ratio = 1.0;
            } else if (b.bit_errors == 0) {
                c.ratio = std::numeric_limits<double>::infinity();
            } else {
                c.ratio = static_cast<double>(a.bit_errors) / static_cast<double>(b.bit_errors);
            }
            if (a.bit_errors > 0 && b.bit_errors > 0 && std::isfinite(c.ratio)) {
                const double rel = 1.96 * std::sqrt(1.0 / a.bit_errors + 1.0 / b.bit_errors);
                c.ci_low = c.ratio * std::exp(-rel);
                c.ci_high = c.ratio * std::exp(rel);
            }
            out.push_back(c);
        }
    }
    return out;
}

inline std::size_t count_parameters(const WeightSet& w) { return w.count(); }

/// CSV with '#' metadata comments, a header row, and the documented column
/// order. Doubles print with 17 significant digits, so rereading the file
/// reproduces the report exactly (frame counts are far below 2^52, making
/// frame_errors = fer * frames recoverable without loss).
inline std::string ber_report_to_csv(const BerReport& report) {
    std::ostringstream os;
    os << "# fingerprint=" << report.config_fingerprint << "\n";
    os << "# seed=" << report.seed << "\n";
    os << "snr_db,decoder,frames,bits,bit_errors,ber,fer\n";
    os.precision(17);
    for (const BerRow& r : report.rows) {
        std::ostringstream line;
        line.precision(17);
        line << r.snr_db << ',' << r.decoder << ',' << r.frames << ',' << r.bits << ','
             << r.bit_errors << ',' << r.ber << ',' << r.fer << "\n";
        os << line.str();
    }
    return os.str();
}

inline BerReport parse_ber_csv(const std::string& text) {
    BerReport report;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (line.find("fingerprint") != std::string::npos && eq != std::string::npos)
                report.config_fingerprint = line.substr(eq + 1);
            if (line.find("seed") != std::string::npos && eq != std::string::npos)
                report.seed = std::stoull(line.substr(eq + 1));
            continue;
        }
        if (line.rfind("snr_db,", 0) == 0) continue;  // header
        std::istringstream ls(line);
        std::string field;
        BerRow r;
        std::getline(ls, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ls, r.decoder, ',');
        std::getline(ls, field, ',');
        r.frames = std::stoll(field);
        std::getline(ls, field, ',');
        r.bits = std::stoll(field);
        std::getline(ls, field, ',');
        r.bit_errors = std::stoll(field);
        std::getline(ls, field, ',');
        r.ber = std::stod(field);
        std::getline(ls, field, ',');
        r.fer = std::stod(field);
        r.frame_errors = static_cast<long long>(std::llround(r.fer * static_cast<double>(r.frames)));
        report.rows.push_back(r);
    }
    return report;
}

}  // namespace turbolab
