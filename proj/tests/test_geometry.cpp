// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mirelay/errors.hpp"
#include "mirelay/geometry.hpp"
#include "mirelay/sampling.hpp"
#include "support.hpp"

using namespace mirelay;

TEST(MutualInductance, CoaxialMatchesEllipticClosedForm) {
    for (double d : {0.02, 0.05, 0.15, 0.5, 1.0}) {
        const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
        const Coil b = Coil::make({0, 0, d}, {0, 0, 1});
        const double expected = oracle::coaxial_mutual(0.012, 0.012, d, 12, 12);
        EXPECT_NEAR(mutual_inductance(a, b), expected, 1e-6 * std::abs(expected)) << "d=" << d;
    }
}

TEST(MutualInductance, DifferentRadiiCoaxial) {
    Coil a = Coil::make({0, 0, 0}, {0, 0, 1}, {0.02, 3, 1e-6, 0.5});
    Coil b = Coil::make({0, 0, 0.03}, {0, 0, 1}, {0.005, 7, 1e-6, 0.5});
    const double expected = oracle::coaxial_mutual(0.02, 0.005, 0.03, 3, 7);
    EXPECT_NEAR(mutual_inductance(a, b), expected, 1e-6 * std::abs(expected));
}

TEST(MutualInductance, ReferencePairAtHalfMetre) {
    const CanonicalPair p = canonical_pair(0.5, Alignment::coaxial());
    EXPECT_NEAR(mutual_inductance(p.tx, p.rx), 4.707143575195366e-11, 1e-6 * 4.707143575195366e-11);
}

TEST(MutualInductance, AgreesWithRefinedTrapezoid) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    int checked = 0;
    while (checked < 40) {
        const Coil a = Coil::make({u(rng), u(rng), u(rng)}, random_unit_vector(rng));
        const Coil b = Coil::make({u(rng), u(rng), u(rng)}, random_unit_vector(rng));
        if ((a.position - b.position).norm() < 0.03) {
            continue;
        }
        const MutualInductanceResult r = mutual_inductance_detail(a, b);
        const double ref = oracle::neumann_trapezoid(a, b, static_cast<int>(4 * r.points));
        EXPECT_NEAR(r.value, ref, 1e-6 * std::abs(ref) + 1e-20) << "pair " << checked;
        ++checked;
    }
}

TEST(MutualInductance, ReciprocalAndSignFlip) {
    std::mt19937_64 rng(8);
    const Coil a = Coil::make({0, 0, 0}, random_unit_vector(rng));
    Coil b = Coil::make({0.04, -0.03, 0.06}, random_unit_vector(rng));
    const double mab = mutual_inductance(a, b);
    const double mba = mutual_inductance(b, a);
    EXPECT_NEAR(mab, mba, 1e-9 * std::abs(mab));
    b.orientation = -b.orientation;
    EXPECT_NEAR(mutual_inductance(a, b), -mab, 1e-9 * std::abs(mab));
}

TEST(MutualInductance, PerpendicularOnAxisIsZero) {
    const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
    const Coil b = Coil::make({0, 0, 0.1}, {1, 0, 0});
    const double coax = oracle::coaxial_mutual(0.012, 0.012, 0.1, 12, 12);
    EXPECT_LT(std::abs(mutual_inductance(a, b)), 1e-10 * coax);
}

TEST(MutualInductance, CoplanarNeighboursCoupleNegatively) {
    const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
    const Coil b = Coil::make({0.05, 0, 0}, {0, 0, 1});
    EXPECT_LT(mutual_inductance(a, b), 0.0);
}

TEST(MutualInductance, CouplingCoefficientBounded) {
    const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
    const Coil b = Coil::make({0, 0, 0.02}, {0, 0, 1});
    const double k = coupling_coefficient(a, b);
    EXPECT_GT(k, 0.0);
    EXPECT_LT(k, 1.0);
    // Twelve filaments 2 mm apart couple more than the stored self inductance allows.
    EXPECT_THROW(coupling_coefficient(a, Coil::make({0, 0, 0.002}, {0, 0, 1})), ModelConsistencyError);
    EXPECT_THROW(coupling_coefficient_from(1.01 * 3.7e-6, a, b), ModelConsistencyError);
}

TEST(MutualInductance, RejectsCoincidentAndIntersectingLoops) {
    const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
    EXPECT_THROW(mutual_inductance(a, a), GeometryError);
    const Coil touching = Coil::make({0.024, 0, 0}, {0, 0, 1});
    EXPECT_THROW(mutual_inductance(a, touching), GeometryError);
}

TEST(Coil, ValidationNamesTheCoil) {
    Coil c = Coil::make({0, 0, 0}, {0, 0, 1});
    c.orientation = Vec3(0, 0, 2);
    try {
        c.validate("relay 7");
        FAIL() << "expected GeometryError";
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("relay 7"), std::string::npos);
    }
    Coil r = Coil::make({0, 0, 0}, {0, 0, 1});
    r.resistance = -1.0;
    EXPECT_THROW(r.validate(), GeometryError);
}

TEST(LoopBasis, RightHanded) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const Vec3 axis = random_unit_vector(rng);
        const auto [u, v] = loop_basis(axis);
        EXPECT_NEAR(u.dot(axis), 0.0, 1e-14);
        EXPECT_NEAR(v.dot(axis), 0.0, 1e-14);
        EXPECT_NEAR((u.cross(v) - axis).norm(), 0.0, 1e-14);
    }
}

TEST(Quadrature, ConvergenceFailureReported) {
    const Coil a = Coil::make({0, 0, 0}, {0, 0, 1});
    const Coil b = Coil::make({0, 0, 0.0005}, {0, 0, 1});
    QuadratureOptions q;
    q.initial_points = 8;
    q.max_points = 16;
    q.rel_tol = 1e-12;
    EXPECT_THROW(mutual_inductance(a, b, q), ConvergenceError);
}
