// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

namespace mirelay::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Vacuum permeability [H/m] (pre-2019 exact value; the CODATA 2018 value differs by 1e-10).
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;

/// Boltzmann constant [J/K], exact since the 2019 SI redefinition.
inline constexpr double boltzmann = 1.380649e-23;

/// ISM carrier used for the resonant relay design.
inline constexpr double default_f0 = 13.56e6;

inline constexpr double angular(double frequency_hz) { return two_pi * frequency_hz; }

} // namespace mirelay::constants
