// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mirelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid coil parameters, intersecting loops, failed placement.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance within the point cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// |k| > 1 or a comparable inconsistency between stored and computed values.
class ModelConsistencyError : public Error {
public:
    using Error::Error;
};

/// Nonpositive port resistance where a passive network is required.
class PassivityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a formula (e.g. |rho| > 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Singular or ill-conditioned relay system at a given frequency.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double frequency_hz)
        : Error(what), frequency_(frequency_hz) {}

    double frequency() const noexcept { return frequency_; }

private:
    double frequency_;
};

/// Malformed network files and experiment configs.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mirelay
