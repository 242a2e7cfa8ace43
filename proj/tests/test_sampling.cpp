// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "mirelay/errors.hpp"
#include "mirelay/sampling.hpp"
#include "support.hpp"

using namespace mirelay;

TEST(Spheroid, VolumeAtHalfMetre) {
    const Spheroid s = Spheroid::around_pair({0, 0, 0}, {0, 0, 0.5});
    EXPECT_NEAR(s.volume() * 1000.0, 585.4012275867271, 1e-9);
    EXPECT_NEAR(s.semi_minor, 0.5, 1e-15);
    EXPECT_NEAR(s.semi_major, std::sqrt(0.25 + 0.0625), 1e-15);
    EXPECT_TRUE(s.contains({0, 0, 0.25}));
    EXPECT_TRUE(s.contains({0.49, 0, 0.25}));
    EXPECT_FALSE(s.contains({0.51, 0, 0.25}));
}

TEST(Spheroid, HitRatioMatchesVolume) {
    const Spheroid s = Spheroid::around_pair({0, 0, 0}, {0, 0, 0.5});
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> bx(-0.5, 0.5);
    std::uniform_real_distribution<double> bz(0.25 - s.semi_major, 0.25 + s.semi_major);
    const int n = 400000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        hits += s.contains({bx(rng), bx(rng), bz(rng)}) ? 1 : 0;
    }
    const double box = 1.0 * 1.0 * 2.0 * s.semi_major;
    const double estimate = box * hits / n;
    EXPECT_NEAR(estimate, s.volume(), 4.0 * box * std::sqrt(0.5 / n));
}

TEST(Sampling, PointsUniformOverOctants) {
    const Spheroid s = Spheroid::around_pair({0, 0, 0}, {0, 0, 0.5});
    std::mt19937_64 rng(12);
    std::array<int, 8> bins{};
    const int n = 80000;
    for (int i = 0; i < n; ++i) {
        const Vec3 p = random_point_in(s, rng);
        ASSERT_TRUE(s.contains(p));
        const Vec3 q = p - s.center;
        bins[(q.x() > 0) + 2 * (q.y() > 0) + 4 * (q.z() > 0)]++;
    }
    double chi2 = 0.0;
    for (int b : bins) {
        chi2 += std::pow(b - n / 8.0, 2) / (n / 8.0);
    }
    EXPECT_LT(chi2, 24.3); // 7 dof, p = 0.001
}

TEST(Sampling, UnitVectorsIsotropic) {
    std::mt19937_64 rng(13);
    Vec3 mean = Vec3::Zero();
    double zz = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Vec3 v = random_unit_vector(rng);
        ASSERT_NEAR(v.norm(), 1.0, 1e-12);
        mean += v;
        zz += v.z() * v.z();
    }
    EXPECT_LT((mean / n).norm(), 0.01);
    EXPECT_NEAR(zz / n, 1.0 / 3.0, 0.006);
}

TEST(Sampling, MeanRelayCountFollowsDensity) {
    SamplingConfig cfg;
    cfg.relay_density = 0.1;
    double total = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        cfg.rng_seed = 100 + s;
        total += static_cast<double>(sample_network(cfg).relay_count());
    }
    const double expected = 58.54012275867271;
    EXPECT_NEAR(total / seeds, expected, 4.0 * std::sqrt(expected / seeds));
}

TEST(Sampling, DeterministicAndSeparated) {
    SamplingConfig cfg;
    cfg.relay_density = 0.2;
    cfg.rng_seed = 77;
    const Network a = sample_network(cfg, {}, {std::nullopt, {}});
    const Network b = sample_network(cfg, {}, {std::nullopt, {}});
    ASSERT_EQ(a.relay_count(), b.relay_count());
    EXPECT_EQ(a.mutual_table(), b.mutual_table());
    EXPECT_EQ(a.rx().orientation, b.rx().orientation);

    std::vector<Vec3> all{a.tx().position, a.rx().position};
    const Spheroid s = Spheroid::around_pair(a.tx().position, a.rx().position);
    for (const Relay& r : a.relays()) {
        EXPECT_TRUE(s.contains(r.coil.position));
        EXPECT_NEAR(r.coil.orientation.norm(), 1.0, 1e-12);
        all.push_back(r.coil.position);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            EXPECT_GE((all[i] - all[j]).norm(), cfg.min_coil_separation);
        }
    }
    cfg.rng_seed = 78;
    EXPECT_NE(sample_network(cfg).mutual_table(), a.mutual_table());
}

TEST(Sampling, FixedCountAndLoads) {
    SamplingConfig cfg;
    cfg.fixed_relay_count = 5;
    const Network net = sample_network(cfg);
    ASSERT_EQ(net.relay_count(), 5u);
    for (const Relay& r : net.relays()) {
        const auto* res = std::get_if<Resonant>(&r.load);
        ASSERT_NE(res, nullptr);
        const double w0 = 2 * oracle::kPi * 13.56e6;
        EXPECT_NEAR(res->capacitance, 1.0 / (w0 * w0 * 3.7e-6), 1e-25);
    }
}

TEST(Sampling, OverfullRegionFails) {
    SamplingConfig cfg;
    cfg.tx_rx_distance = 0.05;
    cfg.fixed_relay_count = 2000;
    cfg.max_placement_attempts = 200;
    EXPECT_THROW(sample_network(cfg), GeometryError);
}

TEST(CanonicalPair, MisalignedOverrideScalesCoaxialValue) {
    const CanonicalPair coax = canonical_pair(0.5, Alignment::coaxial());
    EXPECT_FALSE(coax.mtr_override.has_value());
    const CanonicalPair mis = canonical_pair(0.5, Alignment::misaligned(23.7));
    ASSERT_TRUE(mis.mtr_override.has_value());
    const double m0 = oracle::coaxial_mutual(0.012, 0.012, 0.5, 12, 12);
    EXPECT_NEAR(*mis.mtr_override, m0 * std::pow(10.0, -23.7 / 20.0), 1e-6 * m0);
    EXPECT_EQ(mis.rx.orientation, Vec3::UnitZ());
}

TEST(CanonicalPair, TiltedPairReachesTargetGeometrically) {
    const CanonicalPair p = canonical_pair(0.5, Alignment::tilted(23.7));
    ASSERT_TRUE(p.mtr_override.has_value());
    const double geometric = mutual_inductance(p.tx, p.rx);
    EXPECT_NEAR(geometric, *p.mtr_override, 1e-5 * *p.mtr_override);
    EXPECT_EQ(p.tx.orientation, Vec3::UnitZ());
    EXPECT_GT(std::acos(p.rx.orientation.z()), 1.4);
}

TEST(MisalignedOrientations, WithinWindow) {
    std::mt19937_64 rng(5);
    const OrientedPair p = misaligned_orientations(0.5, 23.7, 0.25, rng);
    const double m0 = oracle::coaxial_mutual(0.012, 0.012, 0.5, 12, 12);
    const double loss = -20.0 * std::log10(std::abs(p.mtr) / m0);
    EXPECT_NEAR(loss, 23.7, 0.25 + 1e-6);
    EXPECT_NEAR(std::abs(p.mtr_target), m0 * std::pow(10.0, -23.7 / 20.0), 1e-6 * m0);
    EXPECT_EQ(std::signbit(p.mtr), std::signbit(p.mtr_target));
}

TEST(SamplingConfig, Validation) {
    SamplingConfig cfg;
    cfg.relay_density = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tx_rx_distance = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
