#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "turbolab/io.hpp"

using namespace turbolab;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("noiseless sweep has zero errors for every decoder") {
    const WeightSet ones = WeightSet::ones(3, 40);
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {0.0};
    exp.noiseless = true;
    exp.max_frames = 50;
    exp.decoders = {{DecoderChoice::Kind::kLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kMaxLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kTurboNet, 3, &ones}};
    const BerReport report = ber_simulate(exp);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.bit_errors == 0);
        CHECK(row.ber == 0.0);
        CHECK(row.frames == 50);
    }
}

TEST_CASE("pure-noise limit sits at coin-flip BER") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {-40.0};
    exp.min_bit_errors = 1 << 30;  // force the frame cap
    exp.max_frames = 3000;         // 120k bits
    exp.decoders = {{DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    const BerReport report = ber_simulate(exp);
    CHECK(report.rows[0].ber == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("paired noise makes identical decoders identical") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {1.0};
    exp.min_bit_errors = 100;
    exp.max_frames = 20000;
    exp.decoders = {{DecoderChoice::Kind::kMaxLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    const BerReport report = ber_simulate(exp);
    CHECK(report.rows[0].bit_errors == report.rows[1].bit_errors);
    CHECK(report.rows[0].frame_errors == report.rows[1].frame_errors);
    const auto cmp = compare_decoders(report);
    REQUIRE(cmp.size() == 1);
    CHECK(cmp[0].ratio == 1.0);
}

TEST_CASE("all-ones TurboNet ties max-log-MAP in a sweep") {
    const WeightSet ones = WeightSet::ones(3, 40);
    ExperimentConfig exp;
    exp.code = lte40_config(true);
    exp.snrs_db = {1.0, 2.0};
    exp.min_bit_errors = 100;
    exp.max_frames = 20000;
    exp.decoders = {{DecoderChoice::Kind::kTurboNet, 3, &ones},
                    {DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    const BerReport report = ber_simulate(exp);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].bit_errors == report.rows[1].bit_errors);
    CHECK(report.rows[2].bit_errors == report.rows[3].bit_errors);
}

TEST_CASE("snr range parsing") {
    const auto r = parse_snr_range("0:0.5:3");
    REQUIRE(r.size() == 7);
    CHECK(r.front() == 0.0);
    CHECK(r.back() == Catch::Approx(3.0));
    const auto list = parse_snr_range("0,1,2.5");
    REQUIRE(list.size() == 3);
    CHECK(list[2] == 2.5);
    CHECK_THROWS_AS(parse_snr_range("3:-1:0"), std::invalid_argument);
}

TEST_CASE("log-MAP does not lose to max-log-MAP at 0 dB") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {0.0};
    exp.min_bit_errors = 2000;
    exp.max_frames = 5000;
    exp.decoders = {{DecoderChoice::Kind::kLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    const BerReport report = ber_simulate(exp);
    CHECK(report.rows[0].bit_errors <= report.rows[1].bit_errors);
}

TEST_CASE("log-MAP does not lose to max-log-MAP at 1 dB") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {1.0};
    exp.min_bit_errors = 300;
    exp.max_frames = 30000;
    exp.decoders = {{DecoderChoice::Kind::kLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    const BerReport report = ber_simulate(exp);
    const auto cmp = compare_decoders(report);
    REQUIRE(cmp.size() == 1);
    CHECK(cmp[0].ci_low <= 1.0);          // ratio <= 1 within the interval
    CHECK(cmp[0].ratio < 1.05);
}

TEST_CASE("missing TurboNet weights are rejected") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {0.0};
    exp.decoders = {{DecoderChoice::Kind::kTurboNet, 3, nullptr}};
    CHECK_THROWS_AS(ber_simulate(exp), std::invalid_argument);
}

TEST_CASE("ber csv round trips losslessly") {
    ExperimentConfig exp;
    exp.code = lte40_config(false);
    exp.snrs_db = {0.0, 0.5};
    exp.min_bit_errors = 50;
    exp.max_frames = 2000;
    exp.seed = 9;
    exp.decoders = {{DecoderChoice::Kind::kMaxLogMap, 3, nullptr},
                    {DecoderChoice::Kind::kLogMap, 2, nullptr}};
    const BerReport report = ber_simulate(exp);
    const std::string csv = ber_report_to_csv(report);
    const BerReport back = parse_ber_csv(csv);

    CHECK(back.config_fingerprint == report.config_fingerprint);
    CHECK(back.seed == report.seed);
    REQUIRE(back.rows.size() == report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(back.rows[i].snr_db == report.rows[i].snr_db);
        CHECK(back.rows[i].decoder == report.rows[i].decoder);
        CHECK(back.rows[i].frames == report.rows[i].frames);
        CHECK(back.rows[i].bits == report.rows[i].bits);
        CHECK(back.rows[i].bit_errors == report.rows[i].bit_errors);
        CHECK(back.rows[i].frame_errors == report.rows[i].frame_errors);  // via fer * frames
        CHECK(back.rows[i].ber == report.rows[i].ber);
        CHECK(back.rows[i].fer == report.rows[i].fer);
    }
}

TEST_CASE("parameter counting") {
    CHECK(count_parameters(WeightSet::ones(3, 40)) == 2880);
    CHECK(count_parameters(WeightSet::ones(1, 1)) == 24);
    CHECK(static_cast<double>(count_parameters(WeightSet::ones(3, 40))) < 0.001 * 3.85e6);
}

TEST_CASE("weight files round trip exactly") {
    const auto path = temp_file("turbolab_test_weights.json");
    WeightSet w = WeightSet::ones(2, 40);
    for (std::size_t i = 0; i < w.values.size(); ++i)
        w.values[i] = 1.0 + 1e-9 * static_cast<double>(i) + 0.1 * std::sin(double(i));
    const TurboCodeConfig code = lte40_config(true);
    const nlohmann::json meta = {{"seed", 7}, {"snr_db", 0.0}};

    save_weights(path.string(), w, code, meta);
    const LoadedWeights back = load_weights(path.string());
    CHECK(back.weights.units == 2);
    CHECK(back.weights.block_len == 40);
    CHECK(back.weights.values == w.values);  // bit-exact
    CHECK(back.code.punctured == true);
    CHECK(back.training.at("seed") == 7);

    save_weights(path.string() + ".2", back.weights, back.code, back.training);
    CHECK(read_text_file(path.string()) == read_text_file(path.string() + ".2"));

    write_text_file(path.string(), "{\"format\":\"nope\"}");
    CHECK_THROWS_AS(load_weights(path.string()), std::runtime_error);
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".2");
}

TEST_CASE("training set files round trip") {
    const auto path = temp_file("turbolab_test_dataset.json");
    const TurboCodeConfig code = lte40_config(false);
    TrainingConfig cfg;
    cfg.samples_per_epoch = 5;
    cfg.seed = 3;
    const auto samples = generate_training_set(code, default_trellis(), cfg);
    save_training_set(path.string(), samples, code, {{"seed", 3}});
    const LoadedTrainingSet back = load_training_set(path.string());
    REQUIRE(back.samples.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(back.samples[i].frame.ys == samples[i].frame.ys);
        CHECK(back.samples[i].frame.y1p == samples[i].frame.y1p);
        CHECK(back.samples[i].frame.y2p == samples[i].frame.y2p);
        CHECK(back.samples[i].target_llrs == samples[i].target_llrs);
        CHECK(back.samples[i].true_bits == samples[i].true_bits);
    }
    std::filesystem::remove(path);
}

TEST_CASE("experiment fingerprints track the config") {
    ExperimentConfig a;
    a.code = lte40_config(false);
    a.snrs_db = {0.0, 1.0};
    a.decoders = {{DecoderChoice::Kind::kMaxLogMap, 3, nullptr}};
    ExperimentConfig b = a;
    CHECK(experiment_fingerprint(a) == experiment_fingerprint(b));
    b.snrs_db.push_back(2.0);
    CHECK(experiment_fingerprint(a) != experiment_fingerprint(b));
}
