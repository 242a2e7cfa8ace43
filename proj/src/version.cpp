// SPDX-License-Identifier: Apache-2.0
#include "mirelay/version.hpp"

#ifndef MIRELAY_VERSION_STRING
#define MIRELAY_VERSION_STRING "unknown"
#endif

namespace mirelay {

const char* version() noexcept { return MIRELAY_VERSION_STRING; }

} // namespace mirelay
