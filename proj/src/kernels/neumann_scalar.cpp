// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "mirelay/neumann_kernel.hpp"

namespace mirelay {

void LoopSamples::resize(std::size_t n) {
    px.resize(n);
    py.resize(n);
    pz.resize(n);
    tx.resize(n);
    ty.resize(n);
    tz.resize(n);
}

NeumannSums neumann_sums_scalar(const LoopSamples& a, const LoopSamples& b) {
    NeumannSums s;
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    for (std::size_t i = 0; i < na; ++i) {
        double row = 0.0;
        double row_coarse = 0.0;
        double row_mag = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
            const double dx = a.px[i] - b.px[j];
            const double dy = a.py[i] - b.py[j];
            const double dz = a.pz[i] - b.pz[j];
            const double dot = a.tx[i] * b.tx[j] + a.ty[i] * b.ty[j] + a.tz[i] * b.tz[j];
            const double term = dot / std::sqrt(dx * dx + dy * dy + dz * dz);
            row += term;
            row_mag += std::abs(term);
            if (j % 2 == 0) {
                row_coarse += term;
            }
        }
        s.fine += row;
        s.magnitude += row_mag;
        if (i % 2 == 0) {
            s.coarse += row_coarse;
        }
    }
    return s;
}

} // namespace mirelay
