// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace mirelay {

/// Linear-interpolation percentile (Hyndman-Fan type 7, the numpy default).
/// p in [0, 100]. Throws std::invalid_argument on empty input or NaN entries.
double percentile(std::span<const double> values, double p);

/// Same as percentile() but for data already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);

double median(std::span<const double> values);
double mean(std::span<const double> values);

/// Fraction of entries strictly greater than `threshold`.
double fraction_above(std::span<const double> values, double threshold);

struct EcdfPoint {
    double value;
    double probability; ///< P(X <= value)
};

/// Empirical CDF with one point per distinct value.
std::vector<EcdfPoint> ecdf(std::span<const double> values);

} // namespace mirelay
