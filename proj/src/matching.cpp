// SPDX-License-Identifier: Apache-2.0
#include "mirelay/matching.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mirelay/errors.hpp"

namespace mirelay {

namespace {

constexpr double kRhoClipTol = 1e-9;

} // namespace

RhoChi rho_chi(const TwoPortZ& z) {
    const double r11 = z.z11.real();
    const double r22 = z.z22.real();
    if (!(r11 > 0.0) || !(r22 > 0.0)) {
        std::ostringstream os;
        os << "two-port is not passive: Re z11 = " << r11 << ", Re z22 = " << r22;
        throw PassivityError(os.str());
    }
    const double norm = std::sqrt(r11) * std::sqrt(r22);
    return {z.z21.real() / norm, z.z21.imag() / norm};
}

double checked_rho(double rho) {
    if (std::abs(rho) <= 1.0) {
        return rho;
    }
    if (std::abs(rho) <= 1.0 + kRhoClipTol) {
        return std::copysign(1.0, rho);
    }
    std::ostringstream os;
    os.precision(17);
    os << "|rho| = " << std::abs(rho) << " exceeds 1 (active or inconsistent two-port)";
    throw DomainError(os.str());
}

double power_gain(double rho, double chi) {
    rho = checked_rho(rho);
    const double num = rho * rho + chi * chi;
    const double den = std::sqrt(1.0 - rho * rho) + std::sqrt(1.0 + chi * chi);
    return num / (den * den);
}

double power_gain_direct(double k, double q_t, double q_r) {
    if (std::abs(k) > 1.0 + 1e-9) {
        throw DomainError("coupling coefficient magnitude exceeds 1");
    }
    if (!(q_t > 0.0) || !(q_r > 0.0)) {
        throw DomainError("Q factors must be positive");
    }
    return power_gain(0.0, k * std::sqrt(q_t * q_r));
}

MatchedTerminations matched_terminations(const TwoPortZ& z) {
    const RhoChi rc = rho_chi(z);
    const double rho = checked_rho(rc.rho);
    const double chi = rc.chi;
    const cplx factor(std::sqrt(1.0 - rho * rho) * std::sqrt(1.0 + chi * chi), -rho * chi);
    MatchedTerminations m;
    m.z_in = factor * z.z11.real() + cplx(0.0, z.z11.imag());
    m.z_out = factor * z.z22.real() + cplx(0.0, z.z22.imag());
    m.lossless_limit = rho * rho == 1.0;
    return m;
}

cplx channel_coefficient(double rho, double chi) {
    rho = checked_rho(rho);
    const double ab = std::sqrt(1.0 - rho * rho) * std::sqrt(1.0 + chi * chi);
    return cplx(rho, chi) / cplx(1.0 + ab, rho * chi);
}

cplx channel_coefficient(const TwoPortZ& z) {
    const RhoChi rc = rho_chi(z);
    return channel_coefficient(rc.rho, rc.chi);
}

Eigen::Matrix2cd scattering_matrix(const TwoPortZ& z) {
    const RhoChi rc = rho_chi(z);
    const double rho = checked_rho(rc.rho);
    const double chi = rc.chi;
    const cplx t(rho, chi);
    const cplx gamma(std::sqrt(1.0 - rho * rho) * std::sqrt(1.0 + chi * chi), rho * chi);
    Eigen::Matrix2cd a;
    a << 1.0, t, t, 1.0;
    const Eigen::Matrix2cd minus = a - std::conj(gamma) * Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd plus = a + gamma * Eigen::Matrix2cd::Identity();
    const cplx det = plus.determinant();
    if (std::abs(det) <= std::numeric_limits<double>::epsilon() * plus.cwiseAbs2().sum()) {
        throw ConditioningError("A + gamma I is singular (degenerate rho, chi)", z.frequency);
    }
    return minus * plus.inverse();
}

cplx scattering_s21(const TwoPortZ& z) { return scattering_matrix(z)(1, 0); }

GainReport gain_report(const TwoPortZ& z) {
    const RhoChi rc = rho_chi(z);
    const MatchedTerminations m = matched_terminations(z);
    GainReport g;
    g.rho = checked_rho(rc.rho);
    g.chi = rc.chi;
    g.eta = power_gain(g.rho, g.chi);
    g.h = channel_coefficient(g.rho, g.chi);
    g.z_in = m.z_in;
    g.z_out = m.z_out;
    g.frequency = z.frequency;
    g.lossless_limit = m.lossless_limit;
    return g;
}

double to_db(double power_ratio) { return 10.0 * std::log10(power_ratio); }

double transducer_gain(const TwoPortZ& z, cplx z_source, cplx z_load) {
    // Thevenin equivalent seen from the load for a unit source EMF.
    const cplx v_th = z.z21 / (z.z11 + z_source);
    const cplx z_th = z.z22 - z.z21 * z.z21 / (z.z11 + z_source);
    const cplx i_load = v_th / (z_th + z_load);
    const double p_load = 0.5 * std::norm(i_load) * z_load.real();
    const double p_avail = 1.0 / (8.0 * z_source.real());
    return p_load / p_avail;
}

} // namespace mirelay
