// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mirelay/neumann_kernel.hpp"

namespace mirelay {

std::string_view to_string(KernelIsa isa) {
    switch (isa) {
    case KernelIsa::scalar:
        return "scalar";
    case KernelIsa::avx2:
        return "avx2";
    }
    return "unknown";
}

bool kernel_available(KernelIsa isa) {
    switch (isa) {
    case KernelIsa::scalar:
        return true;
    case KernelIsa::avx2:
#if defined(MIRELAY_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

KernelIsa default_kernel_isa() {
    static const KernelIsa chosen = [] {
        const char* force = std::getenv("MIRELAY_FORCE_SCALAR");
        if (force != nullptr && std::string(force) != "0") {
            return KernelIsa::scalar;
        }
        return kernel_available(KernelIsa::avx2) ? KernelIsa::avx2 : KernelIsa::scalar;
    }();
    return chosen;
}

NeumannSums neumann_sums(const LoopSamples& a, const LoopSamples& b, KernelIsa isa) {
    switch (isa) {
    case KernelIsa::scalar:
        return neumann_sums_scalar(a, b);
    case KernelIsa::avx2:
#if defined(MIRELAY_HAVE_AVX2)
        if (kernel_available(KernelIsa::avx2) && b.size() % 4 == 0) {
            return neumann_sums_avx2(a, b);
        }
        if (kernel_available(KernelIsa::avx2)) {
            return neumann_sums_scalar(a, b);
        }
#endif
        break;
    }
    throw std::invalid_argument("Neumann kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this build/CPU");
}

NeumannSums neumann_sums(const LoopSamples& a, const LoopSamples& b) {
    return neumann_sums(a, b, default_kernel_isa());
}

} // namespace mirelay
