// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace mirelay {

/// Structure-of-arrays samples of a filamentary loop: positions and unit
/// tangents at equispaced parameter values theta_i = 2*pi*i/n.
struct LoopSamples {
    std::vector<double> px, py, pz;
    std::vector<double> tx, ty, tz;

    std::size_t size() const noexcept { return px.size(); }
    void resize(std::size_t n);
};

/// Raw double sums of the Neumann kernel t_a(i) . t_b(j) / |p_a(i) - p_b(j)|.
struct NeumannSums {
    double fine = 0.0;      ///< over all (i, j)
    double coarse = 0.0;    ///< over even i and even j (the embedded half grid)
    double magnitude = 0.0; ///< sum of absolute terms over all (i, j)
};

enum class KernelIsa { scalar, avx2 };

std::string_view to_string(KernelIsa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool kernel_available(KernelIsa isa);

/// Best available variant, unless MIRELAY_FORCE_SCALAR is set in the environment.
KernelIsa default_kernel_isa();

/// Reference implementation; plain loops, no intrinsics.
NeumannSums neumann_sums_scalar(const LoopSamples& a, const LoopSamples& b);

#if defined(MIRELAY_HAVE_AVX2)
/// AVX2/FMA variant; b.size() must be a multiple of 4.
NeumannSums neumann_sums_avx2(const LoopSamples& a, const LoopSamples& b);
#endif

/// Dispatches to the requested variant. Throws std::invalid_argument if it is unavailable.
NeumannSums neumann_sums(const LoopSamples& a, const LoopSamples& b, KernelIsa isa);

/// Dispatches to default_kernel_isa().
NeumannSums neumann_sums(const LoopSamples& a, const LoopSamples& b);

} // namespace mirelay
