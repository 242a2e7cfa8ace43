// SPDX-License-Identifier: Apache-2.0
#include "mirelay/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"

namespace mirelay {

namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kCancellationFloor = 1e-12;
constexpr std::size_t kIntersectionProbePoints = 256;

double min_wire_distance(const Coil& a, const Coil& b) {
    const LoopSamples sa = sample_loop(a, kIntersectionProbePoints);
    const LoopSamples sb = sample_loop(b, kIntersectionProbePoints);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        for (std::size_t j = 0; j < sb.size(); ++j) {
            const double dx = sa.px[i] - sb.px[j];
            const double dy = sa.py[i] - sb.py[j];
            const double dz = sa.pz[i] - sb.pz[j];
            best = std::min(best, dx * dx + dy * dy + dz * dz);
        }
    }
    return std::sqrt(best);
}

void check_pair(const Coil& a, const Coil& b) {
    a.validate("coil a");
    b.validate("coil b");
    const double center_distance = (a.position - b.position).norm();
    if (center_distance > a.radius + b.radius) {
        return;
    }
    if (center_distance == 0.0 && a.radius == b.radius &&
        std::abs(std::abs(a.orientation.dot(b.orientation)) - 1.0) < kUnitNormTol) {
        throw GeometryError("coincident loops: mutual inductance of a loop with itself is a "
                            "stored self-inductance, not a computed quantity");
    }
    // Probe grid spacing is 2*pi*r/256; wires closer than a small fraction of
    // that are treated as touching.
    const double probe = 1e-6 * std::min(a.radius, b.radius);
    if (min_wire_distance(a, b) < probe) {
        throw GeometryError("loops intersect or touch; Neumann integral is singular");
    }
}

} // namespace

Coil Coil::make(const Vec3& position, const Vec3& orientation, const CoilParams& params) {
    Coil c;
    c.position = position;
    c.orientation = orientation;
    c.radius = params.radius;
    c.turns = params.turns;
    c.self_inductance = params.self_inductance;
    c.resistance = params.resistance;
    return c;
}

void Coil::validate(const std::string& label) const {
    auto fail = [&](const std::string& why) {
        throw GeometryError(label + ": " + why);
    };
    if (!position.allFinite()) {
        fail("position is not finite");
    }
    if (!orientation.allFinite() || std::abs(orientation.norm() - 1.0) > kUnitNormTol) {
        std::ostringstream os;
        os.precision(17);
        os << "orientation must have unit norm (|n| = " << orientation.norm() << ")";
        fail(os.str());
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        fail("radius must be positive");
    }
    if (turns < 1) {
        fail("turns must be >= 1");
    }
    if (!(self_inductance > 0.0) || !std::isfinite(self_inductance)) {
        fail("self inductance must be positive");
    }
    if (!(resistance > 0.0) || !std::isfinite(resistance)) {
        fail("resistance must be positive");
    }
}

std::pair<Vec3, Vec3> loop_basis(const Vec3& axis) {
    // Cross with the coordinate axis least aligned with `axis`.
    Vec3 helper = Vec3::UnitX();
    if (std::abs(axis.y()) < std::abs(axis.x()) && std::abs(axis.y()) <= std::abs(axis.z())) {
        helper = Vec3::UnitY();
    } else if (std::abs(axis.z()) < std::abs(axis.x()) && std::abs(axis.z()) < std::abs(axis.y())) {
        helper = Vec3::UnitZ();
    }
    const Vec3 u = axis.cross(helper).normalized();
    const Vec3 v = axis.cross(u);
    return {u, v};
}

LoopSamples sample_loop(const Coil& coil, std::size_t points) {
    const auto [u, v] = loop_basis(coil.orientation);
    LoopSamples s;
    s.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double theta = constants::two_pi * static_cast<double>(i) / static_cast<double>(points);
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        const Vec3 p = coil.position + coil.radius * (c * u + sn * v);
        const Vec3 t = -sn * u + c * v;
        s.px[i] = p.x();
        s.py[i] = p.y();
        s.pz[i] = p.z();
        s.tx[i] = t.x();
        s.ty[i] = t.y();
        s.tz[i] = t.z();
    }
    return s;
}

MutualInductanceResult mutual_inductance_detail(const Coil& a, const LoopSamples& a_samples,
                                                const Coil& b, const LoopSamples& b_samples,
                                                const QuadratureOptions& opts) {
    check_pair(a, b);
    if (opts.initial_points < 8 || opts.initial_points % 4 != 0) {
        throw std::invalid_argument("quadrature initial_points must be a multiple of 4 and >= 8");
    }
    const double prefactor = static_cast<double>(a.turns) * static_cast<double>(b.turns) *
                             (constants::mu0 / (4.0 * constants::pi)) * a.radius * b.radius;

    LoopSamples refined_a;
    LoopSamples refined_b;
    const LoopSamples* sa = &a_samples;
    const LoopSamples* sb = &b_samples;
    if (sa->size() != opts.initial_points) {
        refined_a = sample_loop(a, opts.initial_points);
        sa = &refined_a;
    }
    if (sb->size() != opts.initial_points) {
        refined_b = sample_loop(b, opts.initial_points);
        sb = &refined_b;
    }

    std::size_t n = opts.initial_points;
    for (;;) {
        const NeumannSums sums = neumann_sums(*sa, *sb);
        const double step = constants::two_pi / static_cast<double>(n);
        const double fine = prefactor * step * step * sums.fine;
        const double coarse = prefactor * 4.0 * step * step * sums.coarse;
        const double floor = kCancellationFloor * prefactor * step * step * sums.magnitude;
        if (!std::isfinite(fine) || !std::isfinite(coarse)) {
            throw GeometryError("Neumann quadrature produced a non-finite value (touching loops?)");
        }
        const double change = std::abs(fine - coarse);
        if (change <= opts.rel_tol * std::abs(fine) || change <= floor) {
            MutualInductanceResult r;
            r.value = fine;
            r.points = n;
            r.relative_change = fine != 0.0 ? change / std::abs(fine) : 0.0;
            return r;
        }
        n *= 2;
        if (n > opts.max_points) {
            std::ostringstream os;
            os.precision(3);
            os << "Neumann quadrature not converged at " << n / 2
               << " points per loop (relative change " << change / std::abs(fine)
               << ", center distance " << (a.position - b.position).norm() << " m)";
            throw ConvergenceError(os.str());
        }
        refined_a = sample_loop(a, n);
        refined_b = sample_loop(b, n);
        sa = &refined_a;
        sb = &refined_b;
    }
}

MutualInductanceResult mutual_inductance_detail(const Coil& a, const Coil& b,
                                                const QuadratureOptions& opts) {
    check_pair(a, b);
    const LoopSamples sa = sample_loop(a, opts.initial_points);
    const LoopSamples sb = sample_loop(b, opts.initial_points);
    return mutual_inductance_detail(a, sa, b, sb, opts);
}

double mutual_inductance(const Coil& a, const Coil& b, const QuadratureOptions& opts) {
    return mutual_inductance_detail(a, b, opts).value;
}

double coupling_coefficient_from(double mutual, const Coil& a, const Coil& b) {
    const double k = mutual / std::sqrt(a.self_inductance * b.self_inductance);
    if (std::abs(k) > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "coupling coefficient |k| = " << std::abs(k)
           << " exceeds 1: filament model and stored self inductances are inconsistent "
              "(center distance "
           << (a.position - b.position).norm() << " m)";
        throw ModelConsistencyError(os.str());
    }
    return k;
}

double coupling_coefficient(const Coil& a, const Coil& b, const QuadratureOptions& opts) {
    return coupling_coefficient_from(mutual_inductance(a, b, opts), a, b);
}

} // namespace mirelay
