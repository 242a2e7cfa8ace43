// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "mirelay/circuit.hpp"

namespace mirelay {

/// Normalized transimpedance rho + j*chi = z21 / sqrt(Re z11 Re z22).
struct RhoChi {
    double rho = 0.0;
    double chi = 0.0;
};

/// Throws PassivityError when Re z11 <= 0 or Re z22 <= 0.
RhoChi rho_chi(const TwoPortZ& z);

/// rho values within 1e-9 outside [-1, 1] are clipped; larger violations
/// throw DomainError.
double checked_rho(double rho);

/// Power gain under simultaneous conjugate matching:
/// (rho^2 + chi^2) / (sqrt(1 - rho^2) + sqrt(1 + chi^2))^2.
double power_gain(double rho, double chi);
inline double power_gain(const RhoChi& rc) { return power_gain(rc.rho, rc.chi); }

/// Direct-link gain from k and the coil Q factors; routed through power_gain(0, k sqrt(Qt Qr)).
double power_gain_direct(double k, double q_t, double q_r);

struct MatchedTerminations {
    cplx z_in;  ///< port-1 impedance seen by the source; the source is z_in*
    cplx z_out; ///< port-2 impedance seen by the load; the load is z_out*
    bool lossless_limit = false; ///< rho^2 == 1, Re z_in = Re z_out = 0
};

/// Positive-real-part solution of the simultaneous conjugate matching problem.
MatchedTerminations matched_terminations(const TwoPortZ& z);

/// Channel coefficient (power-wave ratio) of the matched two-port; |h|^2 = eta.
cplx channel_coefficient(double rho, double chi);
cplx channel_coefficient(const TwoPortZ& z);

/// Generalized scattering matrix of the matched two-port, (A - conj(g) I)(A + g I)^{-1}.
Eigen::Matrix2cd scattering_matrix(const TwoPortZ& z);
cplx scattering_s21(const TwoPortZ& z);

struct GainReport {
    double rho = 0.0;
    double chi = 0.0;
    double eta = 0.0;
    cplx h;
    cplx z_in;
    cplx z_out;
    double frequency = 0.0;
    bool lossless_limit = false;
};

GainReport gain_report(const TwoPortZ& z);

/// 10 log10 for power ratios.
double to_db(double power_ratio);

/// Power delivered to `z_load` by a unit-EMF source with internal impedance
/// `z_source`, divided by the available source power |v|^2 / (4 Re z_source).
/// Evaluated through the load-side Thevenin equivalent.
double transducer_gain(const TwoPortZ& z, cplx z_source, cplx z_load);

} // namespace mirelay
