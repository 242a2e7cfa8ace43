// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "mirelay/matching.hpp"
#include "mirelay/sweep.hpp"
#include "support.hpp"

using namespace mirelay;

TEST(FrequencyEvaluator, ModalFormMatchesDenseSolve) {
    std::mt19937_64 rng(1);
    for (std::size_t n : {1u, 5u, 40u}) {
        const Network net = oracle::random_network(n, rng);
        const FrequencyEvaluator eval(net);
        EXPECT_TRUE(eval.uses_modal_form());
        for (double f = 12.0e6; f <= 15.0e6; f += 0.137e6) {
            const TwoPortZ a = eval.two_port(f);
            const TwoPortZ b = effective_two_port(net, f);
            EXPECT_LT(std::abs(a.z21 - b.z21), 1e-9 * std::abs(b.z21)) << n << " " << f;
            EXPECT_LT(std::abs(a.z11 - b.z11), 1e-9 * std::abs(b.z11));
            EXPECT_LT(std::abs(a.z22 - b.z22), 1e-9 * std::abs(b.z22));
            EXPECT_NEAR(eval.eta(f), power_gain(rho_chi(b)), 1e-9 * power_gain(rho_chi(b)));
        }
    }
}

TEST(FrequencyEvaluator, RespectsSwitchState) {
    std::mt19937_64 rng(2);
    const Network net = oracle::random_network(12, rng);
    SwitchState s = SwitchState::all_on(12);
    s.set(3, false);
    s.set(7, false);
    const FrequencyEvaluator eval(net, s);
    const TwoPortZ b = effective_two_port(net, 13.7e6, s);
    EXPECT_LT(std::abs(eval.two_port(13.7e6).z21 - b.z21), 1e-9 * std::abs(b.z21));
}

TEST(FrequencyEvaluator, HeterogeneousRelaysUseDenseSolve) {
    std::mt19937_64 rng(3);
    const Network base = oracle::random_network(6, rng);
    std::vector<LoadState> loads;
    for (const Relay& r : base.relays()) {
        loads.push_back(r.load);
    }
    loads[0] = CustomLoad{{2.0, -10.0}};
    const Network net = base.with_loads(loads);
    const FrequencyEvaluator eval(net);
    EXPECT_FALSE(eval.uses_modal_form());
    EXPECT_EQ(eval.two_port(13e6).z21, effective_two_port(net, 13e6).z21);
}

TEST(FrequencyEvaluator, NoRelaysIsDirectLink) {
    std::mt19937_64 rng(4);
    const Network net = oracle::random_network(0, rng);
    const FrequencyEvaluator eval(net);
    EXPECT_EQ(eval.two_port(13e6).z21, direct_two_port(net, 13e6).z21);
}
