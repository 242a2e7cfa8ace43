// SPDX-License-Identifier: Apache-2.0
#include "mirelay/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mirelay {

namespace {

std::vector<double> sorted_copy(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("statistic of an empty sample");
    }
    std::vector<double> v(values.begin(), values.end());
    if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); })) {
        throw std::invalid_argument("sample contains NaN");
    }
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

double percentile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("percentile of an empty sample");
    }
    if (!(p >= 0.0 && p <= 100.0)) {
        throw std::invalid_argument("percentile outside [0, 100]");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || sorted[lo] == sorted[hi]) {
        return sorted[lo];
    }
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::span<const double> values, double p) {
    const std::vector<double> v = sorted_copy(values);
    return percentile_sorted(v, p);
}

double median(std::span<const double> values) { return percentile(values, 50.0); }

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty sample");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double fraction_above(std::span<const double> values, double threshold) {
    if (values.empty()) {
        throw std::invalid_argument("fraction of an empty sample");
    }
    const auto n = std::count_if(values.begin(), values.end(),
                                 [&](double x) { return x > threshold; });
    return static_cast<double>(n) / static_cast<double>(values.size());
}

std::vector<EcdfPoint> ecdf(std::span<const double> values) {
    const std::vector<double> v = sorted_copy(values);
    std::vector<EcdfPoint> out;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i + 1 < v.size() && v[i + 1] == v[i]) {
            continue;
        }
        out.push_back({v[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

} // namespace mirelay
