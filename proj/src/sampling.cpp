// SPDX-License-Identifier: Apache-2.0
#include "mirelay/sampling.hpp"

#include <cmath>
#include <sstream>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"

namespace mirelay {

void SamplingConfig::validate() const {
    if (!(tx_rx_distance > 0.0) || !std::isfinite(tx_rx_distance)) {
        throw ConfigError("tx_rx_distance must be positive");
    }
    if (!(relay_density >= 0.0) || !std::isfinite(relay_density)) {
        throw ConfigError("relay_density must be >= 0");
    }
    if (!(min_coil_separation >= 0.0)) {
        throw ConfigError("min_coil_separation must be >= 0");
    }
    if (!(design_frequency > 0.0)) {
        throw ConfigError("design_frequency must be positive");
    }
    if (max_placement_attempts == 0) {
        throw ConfigError("max_placement_attempts must be >= 1");
    }
}

Spheroid Spheroid::around_pair(const Vec3& tx, const Vec3& rx) {
    const Vec3 d = rx - tx;
    const double separation = d.norm();
    Spheroid s;
    s.center = 0.5 * (tx + rx);
    s.axis = d / separation;
    s.semi_minor = separation;
    const double c = 0.5 * separation;
    s.semi_major = std::sqrt(s.semi_minor * s.semi_minor + c * c);
    return s;
}

double Spheroid::volume() const {
    return 4.0 / 3.0 * constants::pi * semi_major * semi_minor * semi_minor;
}

bool Spheroid::contains(const Vec3& p) const {
    const Vec3 r = p - center;
    const double along = r.dot(axis);
    const double across2 = (r - along * axis).squaredNorm();
    return along * along / (semi_major * semi_major) + across2 / (semi_minor * semi_minor) <= 1.0;
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> cos_theta(-1.0, 1.0);
    std::uniform_real_distribution<double> phi(0.0, constants::two_pi);
    const double z = cos_theta(rng);
    const double p = phi(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec3 v(s * std::cos(p), s * std::sin(p), z);
    return v.normalized();
}

Vec3 random_point_in(const Spheroid& s, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec3 q;
    do {
        q = Vec3(u(rng), u(rng), u(rng));
    } while (q.squaredNorm() > 1.0);
    const auto [e1, e2] = loop_basis(s.axis);
    return s.center + s.semi_major * q.z() * s.axis + s.semi_minor * (q.x() * e1 + q.y() * e2);
}

Network sample_network(const SamplingConfig& cfg, const EndpointRule& tx_rule,
                       const EndpointRule& rx_rule, std::optional<double> mtr_override) {
    cfg.validate();
    std::mt19937_64 rng(cfg.rng_seed);

    const Vec3 tx_orientation =
        tx_rule.orientation ? tx_rule.orientation->normalized() : random_unit_vector(rng);
    const Vec3 rx_orientation =
        rx_rule.orientation ? rx_rule.orientation->normalized() : random_unit_vector(rng);
    Coil tx = Coil::make(Vec3::Zero(), tx_orientation, tx_rule.params);
    Coil rx = Coil::make(Vec3(0.0, 0.0, cfg.tx_rx_distance), rx_orientation, rx_rule.params);

    const Spheroid region = Spheroid::around_pair(tx.position, rx.position);
    std::size_t count = 0;
    if (cfg.fixed_relay_count) {
        count = *cfg.fixed_relay_count;
    } else {
        const double mean = cfg.relay_density * region.volume() * 1000.0; // m^3 -> dm^3
        if (mean > 0.0) {
            count = std::poisson_distribution<std::size_t>(mean)(rng);
        }
    }

    std::vector<Vec3> occupied{tx.position, rx.position};
    occupied.reserve(count + 2);
    const double min_sep2 = cfg.min_coil_separation * cfg.min_coil_separation;
    const Resonant load = resonant_for(cfg.relay_coil.self_inductance, cfg.design_frequency);

    std::vector<Relay> relays;
    relays.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Vec3 p;
        std::size_t attempts = 0;
        for (;;) {
            if (++attempts > cfg.max_placement_attempts) {
                std::ostringstream os;
                os << "could not place relay " << k << " with center separation >= "
                   << cfg.min_coil_separation << " m after " << cfg.max_placement_attempts
                   << " attempts";
                throw GeometryError(os.str());
            }
            p = random_point_in(region, rng);
            bool clear = true;
            for (const Vec3& q : occupied) {
                if ((p - q).squaredNorm() < min_sep2) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                break;
            }
        }
        occupied.push_back(p);
        relays.push_back(Relay{Coil::make(p, random_unit_vector(rng), cfg.relay_coil), load});
    }

    return Network::build(std::move(tx), std::move(rx), std::move(relays), mtr_override,
                          cfg.design_frequency, cfg.quadrature);
}

CanonicalPair canonical_pair(double distance, const Alignment& alignment,
                             const CoilParams& params, const QuadratureOptions& quad) {
    if (!(distance > 0.0)) {
        throw ConfigError("canonical_pair: distance must be positive");
    }
    CanonicalPair pair;
    pair.tx = Coil::make(Vec3::Zero(), Vec3::UnitZ(), params);
    pair.rx = Coil::make(Vec3(0.0, 0.0, distance), Vec3::UnitZ(), params);
    if (alignment.kind == Alignment::Kind::coaxial) {
        return pair;
    }
    const double coaxial = mutual_inductance(pair.tx, pair.rx, quad);
    const double target = coaxial * std::pow(10.0, -alignment.attenuation_db / 20.0);
    pair.mtr_override = target;
    if (alignment.kind == Alignment::Kind::tilted) {
        if (!(alignment.attenuation_db > 0.0)) {
            throw ConfigError("canonical_pair: tilted pair needs a positive attenuation");
        }
        auto tilt = [](double angle) { return Vec3(0.0, std::sin(angle), std::cos(angle)); };
        // M_tr falls monotonically from the coaxial value to zero at 90 degrees.
        double lo = 0.0;
        double hi = constants::pi / 2.0;
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            Coil rx = pair.rx;
            rx.orientation = tilt(mid);
            (mutual_inductance(pair.tx, rx, quad) > target ? lo : hi) = mid;
        }
        pair.rx.orientation = tilt(0.5 * (lo + hi));
    }
    return pair;
}

OrientedPair misaligned_orientations(double distance, double attenuation_db, double window_db,
                                     std::mt19937_64& rng, const CoilParams& params,
                                     const QuadratureOptions& quad, std::size_t max_draws) {
    if (!(distance > 0.0) || !(window_db > 0.0)) {
        throw ConfigError("misaligned_orientations: distance and window must be positive");
    }
    const CanonicalPair coax = canonical_pair(distance, Alignment::coaxial(), params, quad);
    const double coaxial = std::abs(mutual_inductance(coax.tx, coax.rx, quad));
    const double target = coaxial * std::pow(10.0, -attenuation_db / 20.0);
    OrientedPair out{coax.tx, coax.rx, 0.0, 0.0, 0};
    while (out.draws < max_draws) {
        ++out.draws;
        out.tx.orientation = random_unit_vector(rng);
        out.rx.orientation = random_unit_vector(rng);
        const double m = mutual_inductance(out.tx, out.rx, quad);
        if (std::abs(20.0 * std::log10(std::abs(m) / target)) <= window_db) {
            out.mtr = m;
            out.mtr_target = std::copysign(target, m);
            return out;
        }
    }
    throw GeometryError("misaligned_orientations: no orientation pair within the window after " +
                        std::to_string(max_draws) + " draws");
}

} // namespace mirelay
