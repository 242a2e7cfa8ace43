// SPDX-License-Identifier: Apache-2.0
#include "mirelay/sweep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"
#include "mirelay/linalg.hpp"
#include "mirelay/matching.hpp"

namespace mirelay {

namespace {

bool same_load(const LoadState& a, const LoadState& b) {
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto* ra = std::get_if<Resonant>(&a)) {
        return ra->capacitance == std::get<Resonant>(b).capacitance;
    }
    if (const auto* ca = std::get_if<CustomLoad>(&a)) {
        return ca->impedance == std::get<CustomLoad>(b).impedance;
    }
    return true;
}

} // namespace

FrequencyEvaluator::FrequencyEvaluator(const Network& net)
    : FrequencyEvaluator(net, SwitchState::all_on(net.relay_count())) {}

FrequencyEvaluator::FrequencyEvaluator(const Network& net, const SwitchState& state)
    : net_(net), state_(state), active_(net.active_relays(state)) {
    if (active_.empty()) {
        return;
    }
    const Relay& first = net_.relays()[active_.front()];
    modal_ = true;
    for (std::size_t r : active_) {
        const Relay& relay = net_.relays()[r];
        if (relay.coil.resistance != first.coil.resistance ||
            relay.coil.self_inductance != first.coil.self_inductance ||
            !same_load(relay.load, first.load)) {
            modal_ = false;
            break;
        }
    }
    if (!modal_) {
        return;
    }
    relay_resistance_ = first.coil.resistance;
    relay_inductance_ = first.coil.self_inductance;
    relay_load_ = first.load;

    const auto n = static_cast<Eigen::Index>(active_.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    Eigen::Matrix<double, 2, Eigen::Dynamic> m(2, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t ri = active_[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double mij = net_.mrr(ri, active_[static_cast<std::size_t>(j)]);
            k(i, j) = mij;
            k(j, i) = mij;
        }
        m(0, i) = net_.mtx(ri);
        m(1, i) = net_.mrx(ri);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    if (eig.info() != Eigen::Success) {
        modal_ = false;
        return;
    }
    lambda_ = eig.eigenvalues();
    w_ = m * eig.eigenvectors();
}

TwoPortZ FrequencyEvaluator::two_port(double frequency) const {
    if (!modal_) {
        return effective_two_port(net_, frequency, state_);
    }
    TwoPortZ z = direct_two_port(net_, frequency);
    const double w = constants::angular(frequency);
    const cplx d = cplx(relay_resistance_, w * relay_inductance_) + load_impedance(relay_load_, w);

    double mu_max = 0.0;
    double mu_min = std::numeric_limits<double>::infinity();
    cplx g11 = 0.0;
    cplx g21 = 0.0;
    cplx g22 = 0.0;
    for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
        const cplx mu = d + cplx(0.0, w * lambda_(i));
        const double amu = std::abs(mu);
        mu_max = std::max(mu_max, amu);
        mu_min = std::min(mu_min, amu);
        const cplx inv = 1.0 / mu;
        const double a = w_(0, i);
        const double b = w_(1, i);
        g11 += a * a * inv;
        g21 += a * b * inv;
        g22 += b * b * inv;
    }
    if (!(mu_min > 0.0) || mu_max / mu_min > kMaxConditionNumber) {
        std::ostringstream os;
        os.precision(10);
        os << "relay system is singular or ill-conditioned at f = " << frequency << " Hz";
        throw ConditioningError(os.str(), frequency);
    }
    z.z11 += w * w * g11;
    z.z21 += w * w * g21;
    z.z22 += w * w * g22;
    return z;
}

double FrequencyEvaluator::eta(double frequency) const {
    return power_gain(rho_chi(two_port(frequency)));
}

} // namespace mirelay
