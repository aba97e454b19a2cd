#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>
#include <set>
#include <vector>

#include "turbolab/trellis.hpp"

using namespace turbolab;

namespace {

// Straight shift-register rollout of g0 = 1+D^2+D^3 (feedback) and
// g1 = 1+D+D^3 (parity), written without the transition tables so it can
// cross-check them.
struct ReferenceRollout {
    std::vector<int> parity;
    std::array<int, 3> tail_sys{}, tail_par{};
};

ReferenceRollout reference_rsce(const std::vector<std::uint8_t>& u) {
    ReferenceRollout out;
    int d1 = 0, d2 = 0, d3 = 0;  // d1 is the newest register bit
    for (const auto b : u) {
        const int a = b ^ d2 ^ d3;
        out.parity.push_back(a ^ d1 ^ d3);
        d3 = d2;
        d2 = d1;
        d1 = a;
    }
    for (int i = 0; i < 3; ++i) {
        const int b = d2 ^ d3;  // cancels the feedback, register input becomes 0
        out.tail_sys[i] = b;
        out.tail_par[i] = d1 ^ d3;
        d3 = d2;
        d2 = d1;
        d1 = 0;
    }
    return out;
}

}  // namespace

TEST_CASE("state transition tables match the known RSCE transitions") {
    const TrellisSpec spec = build_trellis();
    const std::array<int, 8> next_u0 = {0, 4, 5, 1, 2, 6, 7, 3};
    const std::array<int, 8> next_u1 = {4, 0, 1, 5, 6, 2, 3, 7};
    for (int s = 0; s < 8; ++s) {
        CHECK(spec.next_state[s][0] == next_u0[s]);
        CHECK(spec.next_state[s][1] == next_u1[s]);
    }
}

TEST_CASE("next-state map is a permutation for each input bit") {
    const TrellisSpec spec = build_trellis();
    for (int b = 0; b < 2; ++b) {
        std::set<int> image;
        for (int s = 0; s < 8; ++s) image.insert(spec.next_state[s][b]);
        CHECK(image.size() == 8);
    }
}

TEST_CASE("S0 and S1 transition sets partition the 16 transitions") {
    const TrellisSpec spec = build_trellis();
    REQUIRE(spec.s0_pairs.size() == 8);
    REQUIRE(spec.s1_pairs.size() == 8);
    std::set<std::pair<int, int>> all;
    for (const auto& p : spec.s0_pairs) all.insert(p);
    for (const auto& p : spec.s1_pairs) all.insert(p);
    CHECK(all.size() == 16);
}

TEST_CASE("single steps") {
    const TrellisSpec spec = build_trellis();
    CHECK(step(spec, 0, 0) == std::pair<int, int>{0, 0});
    CHECK(step(spec, 0, 1) == std::pair<int, int>{4, 1});
    CHECK(step(spec, 1, 0) == std::pair<int, int>{4, 0});
    CHECK_THROWS_AS(step(spec, 8, 0), std::invalid_argument);
    CHECK_THROWS_AS(step(spec, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(step(spec, 0, 2), std::invalid_argument);
}

TEST_CASE("transition labels agree with the step function") {
    const TrellisSpec spec = build_trellis();
    for (int t = 0; t < 16; ++t) {
        CHECK(spec.t_from[t] == t / 2);
        CHECK(spec.t_bit[t] == t % 2);
        CHECK(spec.t_to[t] == spec.next_state[t / 2][t % 2]);
        CHECK(spec.t_parity[t] == spec.parity[t / 2][t % 2]);
    }
}

TEST_CASE("all-zero block encodes to all zeros and terminates") {
    const TrellisSpec spec = build_trellis();
    const std::vector<std::uint8_t> u(40, 0);
    const RsceOutput out = rsce_encode(spec, u);
    CHECK(out.systematic == u);
    CHECK(out.parity == std::vector<std::uint8_t>(40, 0));
    CHECK(out.tail_systematic == std::array<std::uint8_t, 3>{0, 0, 0});
    CHECK(out.tail_parity == std::array<std::uint8_t, 3>{0, 0, 0});
    CHECK(out.final_state == 0);
}

TEST_CASE("encoding matches an independent register rollout") {
    const TrellisSpec spec = build_trellis();

    std::vector<std::uint8_t> impulse(40, 0);
    impulse[0] = 1;
    std::mt19937 gen(1234);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> u(40);
        if (trial == 0) {
            u = impulse;
        } else {
            for (auto& b : u) b = static_cast<std::uint8_t>(gen() & 1);
        }
        const RsceOutput out = rsce_encode(spec, u);
        const ReferenceRollout ref = reference_rsce(u);
        for (int k = 0; k < 40; ++k) CHECK(out.parity[k] == ref.parity[k]);
        for (int i = 0; i < 3; ++i) {
            CHECK(out.tail_systematic[i] == ref.tail_sys[i]);
            CHECK(out.tail_parity[i] == ref.tail_par[i]);
        }
    }
}

TEST_CASE("termination reaches state 0 for random blocks") {
    const TrellisSpec spec = build_trellis();
    std::mt19937 gen(99);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::uint8_t> u(40);
        for (auto& b : u) b = static_cast<std::uint8_t>(gen() & 1);
        const RsceOutput out = rsce_encode(spec, u);
        CHECK(out.final_state == 0);
        CHECK(out.systematic == u);
    }
}

TEST_CASE("empty input is rejected") {
    const TrellisSpec spec = build_trellis();
    CHECK_THROWS_AS(rsce_encode(spec, {}), std::invalid_argument);
}

TEST_CASE("tail incoming lists cover the flush") {
    const TrellisSpec spec = build_trellis();
    int total = 0;
    for (int s = 0; s < 8; ++s) {
        CHECK((spec.in_tail_count[s] == 0 || spec.in_tail_count[s] == 2));
        total += spec.in_tail_count[s];
    }
    CHECK(total == 8);
}
