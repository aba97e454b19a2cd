#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "turbolab/ber.hpp"
#include "turbolab/training.hpp"
#include "turbolab/turbo_code.hpp"
#include "turbolab/turbonet.hpp"

namespace turbolab {

inline constexpr const char* kWeightsLayoutDoc =
    "((unit*2+subnet)*K+k)*12+j; j: 0-2 gamma(la,ys,yp), "
    "3-8 posterior(S1 a/g/b, S0 a/g/b), 9-11 extrinsic(llr,ys,la)";

inline nlohmann::json code_to_json(const TurboCodeConfig& cfg) {
    return {{"block_len", cfg.block_len},
            {"qpp_f1", cfg.qpp_f1},
            {"qpp_f2", cfg.qpp_f2},
            {"punctured", cfg.punctured}};
}

inline TurboCodeConfig code_from_json(const nlohmann::json& j) {
    return make_turbo_config(j.at("block_len").get<int>(), j.at("qpp_f1").get<int>(),
                             j.at("qpp_f2").get<int>(), j.at("punctured").get<bool>());
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

/// Versioned weight file. Values round-trip exactly (shortest-representation
/// doubles), so save -> load -> save is byte-stable.
inline void save_weights(const std::string& path, const WeightSet& w, const TurboCodeConfig& code,
                         const nlohmann::json& training_meta = nlohmann::json::object()) {
    nlohmann::json j;
    j["format"] = "turbonet-weights";
    j["version"] = 1;
    j["code"] = code_to_json(code);
    j["units"] = w.units;
    j["layout"] = kWeightsLayoutDoc;
    j["weights"] = w.values;
    j["training"] = training_meta;
    write_text_file(path, j.dump(2) + "\n");
}

struct LoadedWeights {
    WeightSet weights;
    TurboCodeConfig code;
    nlohmann::json training;
};

inline LoadedWeights load_weights(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    if (j.value("format", "") != std::string("turbonet-weights"))
        throw std::runtime_error("weight file: unexpected format field");
    if (j.value("version", 0) != 1) throw std::runtime_error("weight file: unsupported version");

    LoadedWeights out;
    out.code = code_from_json(j.at("code"));
    out.weights.units = j.at("units").get<int>();
    out.weights.block_len = out.code.block_len;
    out.weights.values = j.at("weights").get<std::vector<double>>();
    if (out.weights.values.size() != static_cast<std::size_t>(out.weights.units) * 2 *
                                         out.weights.block_len * kWeightsPerPosition)
        throw std::runtime_error("weight file: value count does not match units/K");
    out.training = j.value("training", nlohmann::json::object());
    return out;
}

/// Training set file: flattened on-air LLRs per sample plus the log-MAP
/// teacher LLRs and the true bits.
inline void save_training_set(const std::string& path, const std::vector<TrainingSample>& samples,
                              const TurboCodeConfig& code,
                              const nlohmann::json& meta = nlohmann::json::object()) {
    nlohmann::json j;
    j["format"] = "turbolab-training-data";
    j["version"] = 1;
    j["code"] = code_to_json(code);
    j["meta"] = meta;
    nlohmann::json arr = nlohmann::json::array();
    for (const TrainingSample& s : samples) {
        arr.push_back({{"llrs", flatten_llr_frame(code, s.frame)},
                       {"target", s.target_llrs},
                       {"bits", s.true_bits}});
    }
    j["samples"] = std::move(arr);
    write_text_file(path, j.dump() + "\n");
}

struct LoadedTrainingSet {
    std::vector<TrainingSample> samples;
    TurboCodeConfig code;
    nlohmann::json meta;
};

inline LoadedTrainingSet load_training_set(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    if (j.value("format", "") != std::string("turbolab-training-data"))
        throw std::runtime_error("training set file: unexpected format field");
    if (j.value("version", 0) != 1)
        throw std::runtime_error("training set file: unsupported version");
    LoadedTrainingSet out;
    out.code = code_from_json(j.at("code"));
    out.meta = j.value("meta", nlohmann::json::object());
    for (const auto& e : j.at("samples")) {
        TrainingSample s;
        s.frame = depuncture(out.code, e.at("llrs").get<std::vector<double>>());
        s.target_llrs = e.at("target").get<std::vector<double>>();
        s.true_bits = e.at("bits").get<std::vector<std::uint8_t>>();
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace turbolab
