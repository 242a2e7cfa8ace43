// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mirelay/network.hpp"

namespace mirelay {

/// Impedance matrix of a reciprocal two-port (z12 = z21).
struct TwoPortZ {
    cplx z11;
    cplx z21;
    cplx z22;
    double frequency = 0.0; ///< [Hz]

    cplx z12() const noexcept { return z21; }
};

/// Tx-Rx pair without relays: z11 = R_t + jwL_t, z22 = R_r + jwL_r, z21 = jwM.
TwoPortZ direct_two_port(const Coil& tx, const Coil& rx, double mtr, double frequency);
TwoPortZ direct_two_port(const Network& net, double frequency);

/// Relay-side matrices restricted to the relays that carry current.
struct RelaySystem {
    std::vector<std::size_t> active;            ///< relay indices, ascending
    Eigen::MatrixXcd z_rs;                      ///< N' x N'
    Eigen::Matrix<double, 2, Eigen::Dynamic> m; ///< rows: M_tx,n and M_rx,n
};

/// Open-circuited relays (by load or by switch) are excluded entirely.
RelaySystem relay_system_matrices(const Network& net, double frequency);
RelaySystem relay_system_matrices(const Network& net, double frequency, const SwitchState& state);

/// Full 2x2 Z = Z_tr + w^2 M Z_Rs^{-1} M^T, solved without forming the inverse.
/// Throws ConditioningError for singular or ill-conditioned Z_Rs.
Eigen::Matrix2cd effective_impedance_matrix(const Network& net, double frequency,
                                            const SwitchState& state);

TwoPortZ effective_two_port(const Network& net, double frequency);
TwoPortZ effective_two_port(const Network& net, double frequency, const SwitchState& state);

/// The 1 + N'^2 terms whose sum is z21: first jwM_tr, then
/// w^2 M_tx,n (Z_Rs^{-1})_{n,m} M_rx,m in row-major (n, m) order.
std::vector<cplx> transimpedance_phasors(const Network& net, double frequency);
std::vector<cplx> transimpedance_phasors(const Network& net, double frequency,
                                         const SwitchState& state);

} // namespace mirelay
