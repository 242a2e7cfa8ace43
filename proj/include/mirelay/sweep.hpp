// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "mirelay/circuit.hpp"

namespace mirelay {

/// Evaluates the effective two-port of one switching state at many
/// frequencies.
///
/// When every active relay has the same R, L and termination, Z_Rs(w) is
/// d(w) I + jw K with K the real symmetric relay-relay mutual inductance
/// matrix, and one eigendecomposition K = V diag(lambda) V^T turns each
/// frequency point into an O(N) modal sum. Heterogeneous relays fall back
/// to a dense solve per frequency.
class FrequencyEvaluator {
public:
    FrequencyEvaluator(const Network& net, const SwitchState& state);
    explicit FrequencyEvaluator(const Network& net);

    TwoPortZ two_port(double frequency) const;
    double eta(double frequency) const;

    bool uses_modal_form() const noexcept { return modal_; }

private:
    Network net_;
    SwitchState state_;
    std::vector<std::size_t> active_;
    bool modal_ = false;
    Eigen::VectorXd lambda_;
    Eigen::Matrix<double, 2, Eigen::Dynamic> w_; ///< M V
    double relay_resistance_ = 0.0;
    double relay_inductance_ = 0.0;
    LoadState relay_load_;
};

} // namespace mirelay
