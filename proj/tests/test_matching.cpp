// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mirelay/errors.hpp"
#include "mirelay/matching.hpp"
#include "support.hpp"

using namespace mirelay;
using oracle::cplx;

TEST(Matching, RhoChiDefinition) {
    TwoPortZ z{{4.0, 10.0}, {1.0, -3.0}, {9.0, -2.0}, 1e6};
    const RhoChi rc = rho_chi(z);
    EXPECT_DOUBLE_EQ(rc.rho, 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(rc.chi, -3.0 / 6.0);
}

TEST(Matching, GainFormulaSpotValues) {
    EXPECT_DOUBLE_EQ(power_gain(0.0, 0.0), 0.0);
    const double chi = 0.004010485985521333;
    EXPECT_NEAR(to_db(power_gain(0.0, chi)), -53.95669477793636, 1e-9);
    EXPECT_NEAR(power_gain(1.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(power_gain(0.6, 0.8), (0.36 + 0.64) / std::pow(0.8 + std::sqrt(1.64), 2), 1e-15);
}

TEST(Matching, DirectFormEqualsGeneralFormAtZeroRho) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double k = 0.2 * u(rng);
        const double qt = 10.0 + 500.0 * u(rng);
        const double qr = 10.0 + 500.0 * u(rng);
        const double eta2 = power_gain_direct(k, qt, qr);
        const double x = k * k * qt * qr;
        const double eta6 = x / std::pow(1.0 + std::sqrt(1.0 + x), 2);
        EXPECT_NEAR(eta2, eta6, 1e-15 * std::max(1.0, eta6));
    }
    EXPECT_THROW(power_gain_direct(1.5, 10, 10), DomainError);
}

TEST(Matching, AgreesWithMaximumAvailableGain) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const double eta = power_gain(rho_chi(z));
        const double mag = oracle::max_available_gain(z);
        EXPECT_NEAR(eta, mag, 1e-9 * std::max(1e-3, mag)) << i;
    }
}

TEST(Matching, GainEqualsChannelAndScatteringMagnitude) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const GainReport r = gain_report(z);
        EXPECT_NEAR(std::norm(r.h), r.eta, 1e-12);
        EXPECT_NEAR(std::abs(scattering_s21(z) - r.h), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(channel_coefficient(z) - r.h), 0.0, 1e-14);
    }
}

TEST(Matching, ConjugateMatchFixedPoint) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 1000; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const MatchedTerminations m = matched_terminations(z);
        const cplx zs = std::conj(m.z_in);
        const cplx zl = std::conj(m.z_out);
        const cplx zin = z.z11 - z.z21 * z.z21 / (z.z22 + zl);
        const cplx zout = z.z22 - z.z21 * z.z21 / (z.z11 + zs);
        EXPECT_LT(std::abs(zin - m.z_in), 1e-10 * std::abs(m.z_in));
        EXPECT_LT(std::abs(zout - m.z_out), 1e-10 * std::abs(m.z_out));
        EXPECT_NEAR(transducer_gain(z, zs, zl), power_gain(rho_chi(z)), 1e-10);
    }
}

TEST(Matching, ScatteringMatrixDiagonalVanishesAtMatch) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const Eigen::Matrix2cd s = scattering_matrix(z);
        EXPECT_LT(std::abs(s(0, 0)), 1e-10);
        EXPECT_LT(std::abs(s(1, 1)), 1e-10);
        EXPECT_LT(std::abs(s(0, 1) - s(1, 0)), 1e-12);
    }
}

TEST(Matching, PerturbedTerminationsNeverDeliverMore) {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int i = 0; i < 1000; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const MatchedTerminations m = matched_terminations(z);
        const double best = transducer_gain(z, std::conj(m.z_in), std::conj(m.z_out));
        for (double sgn : {-1.0, 1.0}) {
            cplx zs = std::conj(m.z_in), zl = std::conj(m.z_out);
            switch (pick(rng)) {
            case 0: zl = {zl.real() * (1 + 0.01 * sgn), zl.imag()}; break;
            case 1: zl = {zl.real(), zl.imag() * (1 + 0.01 * sgn)}; break;
            case 2: zs = {zs.real() * (1 + 0.01 * sgn), zs.imag()}; break;
            default: zs = {zs.real(), zs.imag() * (1 + 0.01 * sgn)}; break;
            }
            EXPECT_LE(transducer_gain(z, zs, zl), best * (1 + 1e-12));
        }
    }
}

TEST(Matching, GridSearchCannotBeatFormula) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const TwoPortZ z = oracle::random_two_port(rng);
        const double eta = power_gain(rho_chi(z));
        const MatchedTerminations m = matched_terminations(z);
        // For a fixed load the best source is conj(Z_in(load)); scan the load.
        double best = 0.0;
        const cplx zl0 = std::conj(m.z_out);
        for (int a = -40; a <= 40; ++a) {
            for (int b = -40; b <= 40; ++b) {
                const cplx zl(zl0.real() * std::pow(1.15, a), zl0.imag() + 0.05 * b * std::abs(zl0));
                const cplx zin = z.z11 - z.z21 * z.z21 / (z.z22 + zl);
                if (zin.real() <= 0.0) {
                    continue;
                }
                best = std::max(best, transducer_gain(z, std::conj(zin), zl));
            }
        }
        EXPECT_LE(best, eta * (1 + 1e-12));
        EXPECT_GE(best, eta * (1 - 1e-9));
    }
}

TEST(Matching, RhoBoundaryHandling) {
    EXPECT_DOUBLE_EQ(checked_rho(1.0 + 1e-12), 1.0);
    EXPECT_DOUBLE_EQ(checked_rho(-1.0 - 1e-12), -1.0);
    EXPECT_THROW(checked_rho(1.01), DomainError);
    TwoPortZ lossless{{1.0, 3.0}, {1.0, 0.0}, {1.0, -2.0}, 1e6};
    const MatchedTerminations m = matched_terminations(lossless);
    EXPECT_TRUE(m.lossless_limit);
    EXPECT_NEAR(power_gain(rho_chi(lossless)), 1.0, 1e-12);
}

TEST(Matching, NonPassivePortsRejected) {
    TwoPortZ z{{-1.0, 0.0}, {0.1, 0.0}, {1.0, 0.0}, 1e6};
    EXPECT_THROW(rho_chi(z), PassivityError);
}
