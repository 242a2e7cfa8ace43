// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mirelay/circuit.hpp"

namespace mirelay {

/// Evaluates eta for many switching states of one network at one frequency.
///
/// A Factor stores the inverse P of a state's relay system over its active
/// relays, together with u = P M^T and G = M P M^T. A state that differs
/// from a factored one by k switches is then evaluated with block (Schur
/// complement) updates in O(N_a^2 k):
///
///   removing R:  G' = G - U_R^T P_RR^{-1} U_R
///   adding A:    G'' = G' + t^T S^{-1} t,  S = Z_AA - B^T P' B,  t = M_A^T - B^T u'
///
/// with B = Z_{active,A}. Large deltas, long update chains, and poorly
/// conditioned Schur blocks fall back to a dense factorization.
class SwitchingEvaluator {
public:
    struct Options {
        /// Use a dense factorization when more switches than this change.
        /// Zero selects max(4, N / 6).
        std::size_t max_delta = 0;
        /// Refactor a cached inverse after this many chained updates.
        int max_update_depth = 64;
    };

    struct Factor {
        SwitchState state;
        std::vector<Eigen::Index> active; ///< active relay indices, ascending
        Eigen::MatrixXcd p;               ///< over `active`
        Eigen::MatrixXcd u;
        Eigen::Matrix2cd g;
        int depth = 0;

        /// Row of relay `relay` in p and u, or -1 if it is inactive.
        Eigen::Index position(std::size_t relay) const;
    };

    SwitchingEvaluator(const Network& net, double frequency, Options opts);
    SwitchingEvaluator(const Network& net, double frequency)
        : SwitchingEvaluator(net, frequency, Options{}) {}

    std::size_t relay_count() const noexcept { return net_.relay_count(); }
    double frequency() const noexcept { return frequency_; }
    const Network& network() const noexcept { return net_; }

    /// The public path: effective_two_port with the state applied, then power_gain.
    double eta_direct(const SwitchState& state) const;

    /// Dense factorization of a state. Throws ConditioningError.
    std::shared_ptr<const Factor> factor(const SwitchState& state) const;

    /// eta of `state`, updated from `from`. Throws ConditioningError only if
    /// the dense fallback fails too.
    double eta_from(const Factor& from, const SwitchState& state) const;

    /// Factor of `state` derived from `from`.
    std::shared_ptr<const Factor> factor_from(const Factor& from, const SwitchState& state) const;

    /// eta from the quadratic form G = M Z_Rs^{-1} M^T.
    double eta_from_g(const Eigen::Matrix2cd& g) const;

    std::size_t full_factorizations() const noexcept { return full_count_; }
    std::size_t incremental_updates() const noexcept { return update_count_; }

private:
    struct Delta;

    Network net_;
    double frequency_;
    double omega_;
    Options opts_;
    std::vector<bool> usable_; ///< relay load is not OpenCircuit
    Eigen::MatrixXcd z_full_;  ///< relay impedance matrix with every relay closed
    Eigen::MatrixXcd mt_;      ///< N x 2: M_tx, M_rx per relay
    TwoPortZ direct_;
    mutable std::size_t full_count_ = 0;
    mutable std::size_t update_count_ = 0;

    std::size_t max_delta() const;
    bool active(const SwitchState& s, std::size_t r) const { return s[r] && usable_[r]; }
    Delta delta(const Factor& from, const SwitchState& to) const;
};

} // namespace mirelay
