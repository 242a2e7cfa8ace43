// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "mirelay/neumann_kernel.hpp"

namespace mirelay {

using Vec3 = Eigen::Vector3d;

/// Electrical parameters shared by coils built from the same winding.
struct CoilParams {
    double radius = 0.012;           ///< [m]
    int turns = 12;
    double self_inductance = 3.7e-6; ///< [H]
    double resistance = 1.0;         ///< [Ohm]
};

/// A flat circular loop antenna.
///
/// Multi-turn windings are treated as a concentrated filament, so mutual
/// inductances scale with turns_a * turns_b. The self inductance and
/// resistance are stored parameters; they are never derived from geometry.
struct Coil {
    Vec3 position = Vec3::Zero();
    Vec3 orientation = Vec3::UnitZ(); ///< unit axis, right-hand rule with the current direction
    double radius = 0.012;
    int turns = 12;
    double self_inductance = 3.7e-6;
    double resistance = 1.0;

    static Coil make(const Vec3& position, const Vec3& orientation, const CoilParams& params = {});

    CoilParams params() const { return {radius, turns, self_inductance, resistance}; }

    /// Throws GeometryError naming `label` when an invariant does not hold.
    void validate(const std::string& label = "coil") const;
};

struct QuadratureOptions {
    std::size_t initial_points = 64; ///< per loop
    std::size_t max_points = 8192;
    double rel_tol = 1e-6;
};

struct MutualInductanceResult {
    double value = 0.0;          ///< [H]
    std::size_t points = 0;      ///< points per loop of the accepted grid
    double relative_change = 0.0; ///< |M_n - M_{n/2}| / |M_n|
};

/// Orthonormal (u, v) spanning the plane of the loop with u x v = axis.
std::pair<Vec3, Vec3> loop_basis(const Vec3& axis);

/// Equispaced points and unit tangents on the filament of `coil`.
LoopSamples sample_loop(const Coil& coil, std::size_t points);

/// Mutual inductance of two filamentary loops by the periodic trapezoidal
/// rule applied to both line integrals of the Neumann formula.
///
/// The grid is doubled until the result differs from its embedded half
/// grid by less than `opts.rel_tol` relative (or by less than a cancellation
/// floor of 1e-12 times the sum of absolute contributions, which covers
/// pairs whose coupling vanishes by symmetry).
MutualInductanceResult mutual_inductance_detail(const Coil& a, const Coil& b,
                                                const QuadratureOptions& opts = {});

/// Same as mutual_inductance_detail, starting from pre-sampled loops at
/// opts.initial_points (lets callers reuse samples across many pairs).
MutualInductanceResult mutual_inductance_detail(const Coil& a, const LoopSamples& a_samples,
                                                const Coil& b, const LoopSamples& b_samples,
                                                const QuadratureOptions& opts = {});

double mutual_inductance(const Coil& a, const Coil& b, const QuadratureOptions& opts = {});

/// k = M / sqrt(L_a L_b). Throws ModelConsistencyError when |k| > 1 + 1e-9.
double coupling_coefficient(const Coil& a, const Coil& b, const QuadratureOptions& opts = {});
double coupling_coefficient_from(double mutual, const Coil& a, const Coil& b);

} // namespace mirelay
