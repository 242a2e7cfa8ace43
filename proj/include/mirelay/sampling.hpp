// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "mirelay/network.hpp"

namespace mirelay {

/// Random relay placement around a Tx-Rx pair.
///
/// Tx sits at the origin and Rx at (0, 0, tx_rx_distance). Relays are
/// confined to the prolate spheroid with foci at Tx and Rx and minor
/// semi-axis equal to the Tx-Rx separation.
struct SamplingConfig {
    double tx_rx_distance = 0.5;  ///< [m]
    double relay_density = 0.0;   ///< mean relays per dm^3
    std::optional<std::size_t> fixed_relay_count; ///< overrides the Poisson draw
    std::uint64_t rng_seed = 1;
    double min_coil_separation = 0.024; ///< center-to-center [m]
    CoilParams relay_coil{};
    double design_frequency = 13.56e6; ///< relays are resonant here [Hz]
    QuadratureOptions quadrature{};
    std::size_t max_placement_attempts = 100000; ///< per relay

    void validate() const;
};

/// Orientation rule for an endpoint coil; nullopt draws it uniformly on the sphere.
struct EndpointRule {
    std::optional<Vec3> orientation = Vec3::UnitZ();
    CoilParams params{};
};

struct Spheroid {
    Vec3 center;
    Vec3 axis;          ///< unit vector along the major axis
    double semi_major;  ///< a = sqrt(b^2 + c^2)
    double semi_minor;  ///< b

    static Spheroid around_pair(const Vec3& tx, const Vec3& rx);

    double volume() const; ///< [m^3]
    bool contains(const Vec3& p) const;
};

/// Uniform direction on the unit sphere.
Vec3 random_unit_vector(std::mt19937_64& rng);

/// Uniform point inside the spheroid.
Vec3 random_point_in(const Spheroid& s, std::mt19937_64& rng);

/// Draws a network according to `cfg`. Deterministic given cfg.rng_seed.
Network sample_network(const SamplingConfig& cfg, const EndpointRule& tx = {},
                       const EndpointRule& rx = {},
                       std::optional<double> mtr_override = std::nullopt);

struct Alignment {
    enum class Kind { coaxial, misaligned, tilted };
    Kind kind = Kind::coaxial;
    double attenuation_db = 0.0; ///< amplitude attenuation of M_tr, 20 log10 convention

    static Alignment coaxial() { return {Kind::coaxial, 0.0}; }
    static Alignment misaligned(double db) { return {Kind::misaligned, db}; }
    static Alignment tilted(double db) { return {Kind::tilted, db}; }
};

/// 10th-percentile |M_tr| loss for uniformly random orientations at the
/// reference geometry [dB].
inline constexpr double kReferenceMisalignmentDb = 23.7;

struct CanonicalPair {
    Coil tx;
    Coil rx;
    std::optional<double> mtr_override; ///< set for misaligned pairs
};

/// Tx/Rx on the z axis, both facing +z. For a misaligned pair the positions stay
/// coaxial and only the Tx-Rx mutual inductance is replaced by the coaxial
/// value times 10^(-attenuation_db / 20). A tilted pair reaches the same M_tr
/// geometrically: Rx is rotated about the x axis (bisection on the angle) and
/// the override pins M_tr to the exact target.
CanonicalPair canonical_pair(double distance, const Alignment& alignment,
                             const CoilParams& params = {}, const QuadratureOptions& quad = {});

struct OrientedPair {
    Coil tx;
    Coil rx;
    double mtr = 0.0;        ///< mutual inductance of the drawn orientations
    double mtr_target = 0.0; ///< signed target: sign(mtr) * coaxial * 10^(-attenuation_db / 20)
    std::size_t draws = 0;
};

/// Tx/Rx orientations drawn uniformly on the sphere and kept only when
/// |M_tr| lies within `window_db` of the coaxial value attenuated by
/// `attenuation_db`. Positions are those of canonical_pair().
OrientedPair misaligned_orientations(double distance, double attenuation_db, double window_db,
                                     std::mt19937_64& rng, const CoilParams& params = {},
                                     const QuadratureOptions& quad = {},
                                     std::size_t max_draws = 1000000);

} // namespace mirelay
