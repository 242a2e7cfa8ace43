// SPDX-License-Identifier: Apache-2.0
#include "mirelay/circuit.hpp"

#include <cmath>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"
#include "mirelay/linalg.hpp"

namespace mirelay {

namespace {

void require_frequency(double frequency) {
    if (!(frequency > 0.0) || !std::isfinite(frequency)) {
        throw DomainError("frequency must be positive and finite");
    }
}

} // namespace

TwoPortZ direct_two_port(const Coil& tx, const Coil& rx, double mtr, double frequency) {
    require_frequency(frequency);
    const double w = constants::angular(frequency);
    TwoPortZ z;
    z.z11 = cplx(tx.resistance, w * tx.self_inductance);
    z.z22 = cplx(rx.resistance, w * rx.self_inductance);
    z.z21 = cplx(0.0, w * mtr);
    z.frequency = frequency;
    return z;
}

TwoPortZ direct_two_port(const Network& net, double frequency) {
    return direct_two_port(net.tx(), net.rx(), net.mtr(), frequency);
}

RelaySystem relay_system_matrices(const Network& net, double frequency, const SwitchState& state) {
    require_frequency(frequency);
    const double w = constants::angular(frequency);
    RelaySystem sys;
    sys.active = net.active_relays(state);
    const auto n = static_cast<Eigen::Index>(sys.active.size());
    sys.z_rs.resize(n, n);
    sys.m.resize(2, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t ri = sys.active[static_cast<std::size_t>(i)];
        const Relay& relay = net.relays()[ri];
        sys.z_rs(i, i) = cplx(relay.coil.resistance, w * relay.coil.self_inductance) +
                         load_impedance(relay.load, w);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cplx zij(0.0, w * net.mrr(ri, sys.active[static_cast<std::size_t>(j)]));
            sys.z_rs(i, j) = zij;
            sys.z_rs(j, i) = zij;
        }
        sys.m(0, i) = net.mtx(ri);
        sys.m(1, i) = net.mrx(ri);
    }
    return sys;
}

RelaySystem relay_system_matrices(const Network& net, double frequency) {
    return relay_system_matrices(net, frequency, SwitchState::all_on(net.relay_count()));
}

Eigen::Matrix2cd effective_impedance_matrix(const Network& net, double frequency,
                                            const SwitchState& state) {
    const TwoPortZ direct = direct_two_port(net, frequency);
    Eigen::Matrix2cd z;
    z << direct.z11, direct.z21, direct.z21, direct.z22;

    const RelaySystem sys = relay_system_matrices(net, frequency, state);
    if (sys.active.empty()) {
        return z;
    }
    const double w = constants::angular(frequency);
    const GuardedLu lu(sys.z_rs, frequency);
    const Eigen::MatrixXcd mt = sys.m.transpose().cast<cplx>();
    const Eigen::MatrixXcd x = lu.solve(mt);
    z += (w * w) * (sys.m.cast<cplx>() * x);
    return z;
}

TwoPortZ effective_two_port(const Network& net, double frequency, const SwitchState& state) {
    const Eigen::Matrix2cd z = effective_impedance_matrix(net, frequency, state);
    TwoPortZ out;
    out.z11 = z(0, 0);
    out.z21 = z(1, 0);
    out.z22 = z(1, 1);
    out.frequency = frequency;
    return out;
}

TwoPortZ effective_two_port(const Network& net, double frequency) {
    return effective_two_port(net, frequency, SwitchState::all_on(net.relay_count()));
}

std::vector<cplx> transimpedance_phasors(const Network& net, double frequency,
                                         const SwitchState& state) {
    const double w = constants::angular(frequency);
    const RelaySystem sys = relay_system_matrices(net, frequency, state);
    std::vector<cplx> out;
    out.reserve(1 + sys.active.size() * sys.active.size());
    out.emplace_back(0.0, w * net.mtr());
    if (sys.active.empty()) {
        return out;
    }
    const Eigen::MatrixXcd inv = GuardedLu(sys.z_rs, frequency).inverse();
    const auto n = static_cast<Eigen::Index>(sys.active.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out.push_back((w * w) * sys.m(0, i) * inv(i, j) * sys.m(1, j));
        }
    }
    return out;
}

std::vector<cplx> transimpedance_phasors(const Network& net, double frequency) {
    return transimpedance_phasors(net, frequency, SwitchState::all_on(net.relay_count()));
}

} // namespace mirelay
