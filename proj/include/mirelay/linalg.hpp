// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace mirelay {

/// Condition numbers above this are reported as ConditioningError.
inline constexpr double kMaxConditionNumber = 1e12;

/// Dense complex LU with partial pivoting whose construction fails with
/// ConditioningError (carrying `frequency_hz`) when the 1-norm condition
/// estimate exceeds `max_condition`.
class GuardedLu {
public:
    GuardedLu(const Eigen::MatrixXcd& a, double frequency_hz,
              double max_condition = kMaxConditionNumber);

    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const { return lu_.solve(rhs); }
    Eigen::MatrixXcd inverse() const { return lu_.inverse(); }

    /// 1 / rcond (infinite for an empty or exactly singular matrix).
    double condition_estimate() const noexcept { return condition_; }

private:
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double condition_;
};

} // namespace mirelay
