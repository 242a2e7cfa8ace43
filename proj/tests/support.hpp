// SPDX-License-Identifier: Apache-2.0
// Reference formulas for tests. The closed forms do not call into the
// library's numerical code. exhaustive_best enumerates through the public
// two-port path.
#pragma once

#include <cmath>
#include <cstdint>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mirelay/circuit.hpp"
#include "mirelay/geometry.hpp"
#include "mirelay/matching.hpp"
#include "mirelay/network.hpp"
#include "mirelay/sampling.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kMu0 = 4e-7 * kPi;

/// Maxwell's closed form for coaxial circular filaments.
inline double coaxial_mutual(double r1, double r2, double d, int n1 = 1, int n2 = 1) {
    const double k2 = 4.0 * r1 * r2 / ((r1 + r2) * (r1 + r2) + d * d);
    const double k = std::sqrt(k2);
    const double kk = std::comp_ellint_1(k);
    const double ee = std::comp_ellint_2(k);
    return n1 * n2 * kMu0 * std::sqrt(r1 * r2) * ((2.0 / k - k) * kk - 2.0 / k * ee);
}

/// Plain double-loop trapezoid Neumann sum with n points per loop.
inline double neumann_trapezoid(const mirelay::Coil& a, const mirelay::Coil& b, int n) {
    auto frame = [](const Eigen::Vector3d& axis) {
        Eigen::Vector3d helper =
            std::abs(axis.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        Eigen::Vector3d u = axis.cross(helper).normalized();
        Eigen::Vector3d v = axis.cross(u);
        return std::pair{u, v};
    };
    const auto [ua, va] = frame(a.orientation);
    const auto [ub, vb] = frame(b.orientation);
    std::vector<Eigen::Vector3d> pa(n), ta(n), pb(n), tb(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        pa[i] = a.position + a.radius * (std::cos(t) * ua + std::sin(t) * va);
        ta[i] = -std::sin(t) * ua + std::cos(t) * va;
        pb[i] = b.position + b.radius * (std::cos(t) * ub + std::sin(t) * vb);
        tb[i] = -std::sin(t) * ub + std::cos(t) * vb;
    }
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            sum += ta[i].dot(tb[j]) / (pa[i] - pb[j]).norm();
        }
    }
    const double h = 2.0 * kPi / n;
    return a.turns * b.turns * kMu0 / (4.0 * kPi) * a.radius * b.radius * h * h *
           static_cast<double>(sum);
}

/// Maximum available gain of a reciprocal two-port from the Rollett
/// stability factor of its Z-parameters.
inline double max_available_gain(const mirelay::TwoPortZ& z) {
    const cplx z21sq = z.z21 * z.z21;
    const double k = (2.0 * z.z11.real() * z.z22.real() - z21sq.real()) / std::abs(z21sq);
    return 1.0 / (k + std::sqrt(k * k - 1.0));
}

/// Random strictly passive reciprocal two-port with |rho| < 0.95.
inline mirelay::TwoPortZ random_two_port(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> logr(-1.0, 2.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    mirelay::TwoPortZ z;
    const double r11 = std::pow(10.0, logr(rng));
    const double r22 = std::pow(10.0, logr(rng));
    const double scale = std::sqrt(r11 * r22);
    z.z11 = {r11, 300.0 * sym(rng)};
    z.z22 = {r22, 300.0 * sym(rng)};
    z.z21 = {0.95 * scale * sym(rng), std::pow(10.0, 3.0 * sym(rng)) * scale * sym(rng)};
    z.frequency = 13.56e6;
    return z;
}

/// Random network from a synthetic mutual table with |k| well below 1.
inline mirelay::Network random_network(std::size_t n, std::mt19937_64& rng,
                                       double design_frequency = 13.56e6) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const mirelay::Coil tx = mirelay::Coil::make({0, 0, 0}, {0, 0, 1});
    const mirelay::Coil rx = mirelay::Coil::make({0, 0, 0.5}, {0, 0, 1});
    std::vector<mirelay::Relay> relays;
    for (std::size_t i = 0; i < n; ++i) {
        relays.push_back({mirelay::Coil::make({0.1 * u(rng), 0.1 * u(rng), 0.25 + 0.1 * u(rng)},
                                              {0, 0, 1}),
                          mirelay::resonant_for(3.7e-6, design_frequency)});
    }
    const auto m = static_cast<Eigen::Index>(n + 2);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double k = 0.02 * u(rng) * std::pow(10.0, -2.0 * std::abs(u(rng)));
            t(i, j) = t(j, i) = k * 3.7e-6;
        }
    }
    return mirelay::Network::from_mutual_table(tx, rx, std::move(relays), t, std::nullopt,
                                               design_frequency);
}

/// Physical network with `n` relays and random endpoint orientations.
inline mirelay::Network sampled_network(std::size_t n, std::uint64_t seed,
                                        double distance = 0.5) {
    mirelay::SamplingConfig cfg;
    cfg.tx_rx_distance = distance;
    cfg.fixed_relay_count = n;
    cfg.rng_seed = seed;
    return mirelay::sample_network(cfg, {std::nullopt, {}}, {std::nullopt, {}});
}

/// Best state by enumerating all 2^N switch states.
inline std::pair<mirelay::SwitchState, double> exhaustive_best(const mirelay::Network& net,
                                                               double frequency) {
    const std::size_t n = net.relay_count();
    mirelay::SwitchState best(n);
    double best_eta = -1.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        mirelay::SwitchState s(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.set(i, ((mask >> i) & 1u) != 0);
        }
        const double eta =
            mirelay::power_gain(mirelay::rho_chi(mirelay::effective_two_port(net, frequency, s)));
        if (eta > best_eta) {
            best_eta = eta;
            best = s;
        }
    }
    return {best, best_eta};
}

} // namespace oracle
