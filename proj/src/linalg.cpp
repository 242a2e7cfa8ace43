// SPDX-License-Identifier: Apache-2.0
#include "mirelay/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mirelay/errors.hpp"

namespace mirelay {

GuardedLu::GuardedLu(const Eigen::MatrixXcd& a, double frequency_hz, double max_condition)
    : condition_(1.0) {
    if (a.rows() == 0) {
        return;
    }
    if (!a.allFinite()) {
        throw ConditioningError("relay system matrix has non-finite entries", frequency_hz);
    }
    lu_.compute(a);
    const double rcond = lu_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition_ <= max_condition)) {
        std::ostringstream os;
        os.precision(10);
        os << "relay system is singular or ill-conditioned at f = " << frequency_hz
           << " Hz (condition estimate ";
        os.precision(3);
        os << condition_ << ")";
        throw ConditioningError(os.str(), frequency_hz);
    }
}

} // namespace mirelay
