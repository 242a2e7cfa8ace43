// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace mirelay {

/// Project version plus `git describe` output captured at configure time.
const char* version() noexcept;

} // namespace mirelay
