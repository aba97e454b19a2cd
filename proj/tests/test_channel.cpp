#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "turbolab/channel.hpp"

using namespace turbolab;

TEST_CASE("bpsk mapping") {
    CHECK(bpsk_modulate({0, 1, 0}) == std::vector<double>{-1.0, 1.0, -1.0});
    CHECK(bpsk_modulate(std::vector<std::uint8_t>(8, 0)) == std::vector<double>(8, -1.0));
}

TEST_CASE("noise variance formula") {
    ChannelConfig cfg;
    cfg.snr_db = 0.0;
    cfg.rate = 40.0 / 132.0;
    CHECK(cfg.sigma2() == Catch::Approx(1.65).epsilon(1e-12));
    cfg.rate = 0.5;
    CHECK(cfg.sigma2() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("awgn is deterministic under a seed") {
    ChannelConfig cfg;
    cfg.rate = 0.5;
    cfg.seed = 42;
    const std::vector<double> x(100, 1.0);
    CHECK(awgn(x, cfg) == awgn(x, cfg));
}

TEST_CASE("awgn empirical variance at sigma = 1") {
    ChannelConfig cfg;
    cfg.snr_db = 0.0;
    cfg.rate = 0.5;  // sigma^2 = 1
    cfg.seed = 7;
    const std::vector<double> x(1'000'000, 0.0);
    const auto r = awgn(x, cfg);
    double mean = 0.0, var = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    for (double v : r) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.size());
    CHECK(var == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("sigma to zero limit leaves symbols intact") {
    ChannelConfig cfg;
    cfg.snr_db = 100.0;
    cfg.rate = 0.5;
    cfg.seed = 3;
    const std::vector<double> x{1.0, -1.0, 1.0, 1.0};
    const auto r = awgn(x, cfg);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(r[i] == Catch::Approx(x[i]).margin(1e-3));
}

TEST_CASE("llr demapping") {
    ChannelConfig cfg;
    cfg.snr_db = 0.0;
    cfg.rate = 0.5;  // sigma^2 = 1
    CHECK(llr_demap({1.0}, cfg)[0] == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(llr_demap({0.0}, cfg)[0] == 0.0);

    cfg.rate = 40.0 / 132.0;  // sigma^2 = 1.65 at 0 dB
    CHECK(llr_demap({1.0}, cfg)[0] == Catch::Approx(1.2121).margin(1e-4));

    // monotone in |r|, symmetric sign
    cfg.rate = 0.5;
    const auto y = llr_demap({-3.0, -1.0, 0.0, 1.0, 3.0}, cfg);
    for (std::size_t i = 1; i < y.size(); ++i) CHECK(y[i] > y[i - 1]);

    // clamp
    CHECK(llr_demap({1e9}, cfg)[0] == cfg.llr_clamp);
    CHECK(llr_demap({-1e9}, cfg)[0] == -cfg.llr_clamp);
}

TEST_CASE("degenerate sigma is rejected") {
    ChannelConfig cfg;
    cfg.snr_db = 4000.0;  // 10^(400) overflows to inf, sigma^2 = 0
    cfg.rate = 0.5;
    CHECK_THROWS_AS(llr_demap({1.0}, cfg), std::invalid_argument);
}

TEST_CASE("llr signs follow the transmitted symbols at high snr") {
    ChannelConfig cfg;
    cfg.snr_db = 20.0;
    cfg.rate = 0.5;
    cfg.seed = 11;
    std::vector<std::uint8_t> bits(10'000);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<std::uint8_t>(i & 1);
    const auto symbols = bpsk_modulate(bits);
    const auto y = llr_demap(awgn(symbols, cfg), cfg);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] * symbols[i] > 0.0);
}

TEST_CASE("noiseless llrs hit the clamp") {
    const auto y = noiseless_llrs({0, 1, 1}, 50.0);
    CHECK(y == std::vector<double>{-50.0, 50.0, 50.0});
}
