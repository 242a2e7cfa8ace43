// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "mirelay/geometry.hpp"

namespace mirelay {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Relay terminations

/// Series capacitor; resonant with the coil at its design frequency.
struct Resonant {
    double capacitance = 0.0; ///< [F]
};

/// Switch open: no current flows, the relay is electromagnetically inert.
struct OpenCircuit {};

/// Arbitrary passive termination.
struct CustomLoad {
    cplx impedance; ///< [Ohm], Re >= 0
};

using LoadState = std::variant<Resonant, OpenCircuit, CustomLoad>;

/// C = 1 / (omega0^2 L).
Resonant resonant_for(double self_inductance, double design_frequency_hz);

bool is_open(const LoadState& load);

/// Termination impedance at angular frequency omega. Must not be called on OpenCircuit.
cplx load_impedance(const LoadState& load, double omega);

void validate_load(const LoadState& load, const std::string& label);

// ---------------------------------------------------------------------------
// Switching states

/// One bit per relay: true = switch closed (relay uses its configured
/// load), false = open-circuited.
class SwitchState {
public:
    SwitchState() = default;
    explicit SwitchState(std::size_t n, bool value = false) : bits_(n, value) {}

    static SwitchState all_on(std::size_t n) { return SwitchState(n, true); }
    static SwitchState all_off(std::size_t n) { return SwitchState(n, false); }
    static SwitchState single(std::size_t n, std::size_t on_index);
    static SwitchState all_but(std::size_t n, std::size_t off_index);
    static SwitchState from_string(std::string_view bits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, bool value) { bits_[i] = value; }
    void flip(std::size_t i) { bits_[i] = !bits_[i]; }
    std::size_t count() const;

    std::string to_string() const;

    friend bool operator==(const SwitchState&, const SwitchState&) = default;

    const std::vector<bool>& bits() const noexcept { return bits_; }

private:
    std::vector<bool> bits_;
};

std::size_t hamming_distance(const SwitchState& a, const SwitchState& b);

struct SwitchStateHash {
    std::size_t operator()(const SwitchState& s) const noexcept {
        return std::hash<std::vector<bool>>{}(s.bits());
    }
};

// ---------------------------------------------------------------------------
// Network

struct Relay {
    Coil coil;
    LoadState load;
};

/// Tx coil, Rx coil and N relays, with the symmetric table of mutual
/// inductances over all coil pairs. Immutable after construction; copies
/// share the table.
///
/// Node indices into the table: 0 = Tx, 1 = Rx, 2 + n = relay n. The
/// diagonal holds the stored self inductances.
class Network {
public:
    Network() = default;

    /// Computes every pairwise mutual inductance by Neumann quadrature and
    /// checks |k| <= 1 for each pair.
    static Network build(Coil tx, Coil rx, std::vector<Relay> relays,
                         std::optional<double> mtr_override = std::nullopt,
                         std::optional<double> design_frequency = std::nullopt,
                         const QuadratureOptions& quadrature = {});

    /// Uses a caller-supplied table (symmetric, (N+2) x (N+2)); the diagonal
    /// is overwritten with the coils' self inductances.
    static Network from_mutual_table(Coil tx, Coil rx, std::vector<Relay> relays,
                                     Eigen::MatrixXd table,
                                     std::optional<double> mtr_override = std::nullopt,
                                     std::optional<double> design_frequency = std::nullopt);

    const Coil& tx() const noexcept { return tx_; }
    const Coil& rx() const noexcept { return rx_; }
    const std::vector<Relay>& relays() const noexcept { return relays_; }
    std::size_t relay_count() const noexcept { return relays_.size(); }

    /// Tx-Rx mutual inductance, with the override applied.
    double mtr() const;
    double mtx(std::size_t relay) const { return (*table_)(0, 2 + relay); }
    double mrx(std::size_t relay) const { return (*table_)(1, 2 + relay); }
    double mrr(std::size_t a, std::size_t b) const { return (*table_)(2 + a, 2 + b); }
    const Eigen::MatrixXd& mutual_table() const noexcept { return *table_; }

    const std::optional<double>& mtr_override() const noexcept { return mtr_override_; }
    const std::optional<double>& design_frequency() const noexcept { return design_frequency_; }

    /// Same geometry and table, different terminations.
    Network with_loads(std::vector<LoadState> loads) const;

    /// Drops relay `index` and its row/column of the table.
    Network without_relay(std::size_t index) const;

    /// Relays that carry current for the given switching state (closed switch
    /// and a load that is not OpenCircuit), in ascending order.
    std::vector<std::size_t> active_relays(const SwitchState& state) const;
    std::vector<std::size_t> active_relays() const;

private:
    Coil tx_;
    Coil rx_;
    std::vector<Relay> relays_;
    std::optional<double> mtr_override_;
    std::optional<double> design_frequency_;
    std::shared_ptr<const Eigen::MatrixXd> table_;

    void validate() const;
};

} // namespace mirelay
