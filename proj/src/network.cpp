// SPDX-License-Identifier: Apache-2.0
#include "mirelay/network.hpp"

#include <cmath>
#include <sstream>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"

namespace mirelay {

Resonant resonant_for(double self_inductance, double design_frequency_hz) {
    const double w0 = constants::angular(design_frequency_hz);
    return Resonant{1.0 / (w0 * w0 * self_inductance)};
}

bool is_open(const LoadState& load) { return std::holds_alternative<OpenCircuit>(load); }

cplx load_impedance(const LoadState& load, double omega) {
    if (const auto* r = std::get_if<Resonant>(&load)) {
        return cplx(0.0, -1.0 / (omega * r->capacitance));
    }
    if (const auto* c = std::get_if<CustomLoad>(&load)) {
        return c->impedance;
    }
    throw std::logic_error("load_impedance called on an open-circuited relay");
}

void validate_load(const LoadState& load, const std::string& label) {
    if (const auto* r = std::get_if<Resonant>(&load)) {
        if (!(r->capacitance > 0.0) || !std::isfinite(r->capacitance)) {
            throw ConfigError(label + ": resonant capacitance must be positive");
        }
    } else if (const auto* c = std::get_if<CustomLoad>(&load)) {
        if (!std::isfinite(c->impedance.real()) || !std::isfinite(c->impedance.imag())) {
            throw ConfigError(label + ": custom impedance is not finite");
        }
        if (c->impedance.real() < 0.0) {
            throw PassivityError(label + ": custom load impedance must have Re >= 0");
        }
    }
}

// ---------------------------------------------------------------------------

SwitchState SwitchState::single(std::size_t n, std::size_t on_index) {
    SwitchState s(n, false);
    s.set(on_index, true);
    return s;
}

SwitchState SwitchState::all_but(std::size_t n, std::size_t off_index) {
    SwitchState s(n, true);
    s.set(off_index, false);
    return s;
}

SwitchState SwitchState::from_string(std::string_view bits) {
    SwitchState s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            s.set(i, true);
        } else if (bits[i] != '0') {
            throw ConfigError("switch state must consist of '0' and '1' characters");
        }
    }
    return s;
}

std::size_t SwitchState::count() const {
    std::size_t c = 0;
    for (bool b : bits_) {
        c += b ? 1 : 0;
    }
    return c;
}

std::string SwitchState::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out[i] = '1';
        }
    }
    return out;
}

std::size_t hamming_distance(const SwitchState& a, const SwitchState& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a[i] != b[i] ? 1 : 0;
    }
    return d;
}

// ---------------------------------------------------------------------------

Network Network::build(Coil tx, Coil rx, std::vector<Relay> relays,
                       std::optional<double> mtr_override, std::optional<double> design_frequency,
                       const QuadratureOptions& quadrature) {
    std::vector<const Coil*> coils;
    coils.reserve(relays.size() + 2);
    coils.push_back(&tx);
    coils.push_back(&rx);
    for (const Relay& r : relays) {
        coils.push_back(&r.coil);
    }
    const std::size_t n = coils.size();
    for (std::size_t i = 0; i < n; ++i) {
        coils[i]->validate(i == 0 ? "tx" : i == 1 ? "rx" : "relay " + std::to_string(i - 2));
    }

    std::vector<LoopSamples> samples;
    samples.reserve(n);
    for (const Coil* c : coils) {
        samples.push_back(sample_loop(*c, quadrature.initial_points));
    }

    Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (i == 0 && j == 1 && mtr_override) {
                continue;
            }
            const double m =
                mutual_inductance_detail(*coils[i], samples[i], *coils[j], samples[j], quadrature)
                    .value;
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m;
            table(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = m;
        }
    }
    return from_mutual_table(std::move(tx), std::move(rx), std::move(relays), std::move(table),
                             mtr_override, design_frequency);
}

Network Network::from_mutual_table(Coil tx, Coil rx, std::vector<Relay> relays,
                                   Eigen::MatrixXd table, std::optional<double> mtr_override,
                                   std::optional<double> design_frequency) {
    const auto n = static_cast<Eigen::Index>(relays.size() + 2);
    if (table.rows() != n || table.cols() != n) {
        throw ConfigError("mutual inductance table must be (N+2) x (N+2)");
    }
    Network net;
    net.tx_ = std::move(tx);
    net.rx_ = std::move(rx);
    net.relays_ = std::move(relays);
    net.mtr_override_ = mtr_override;
    net.design_frequency_ = design_frequency;
    if (mtr_override) {
        table(0, 1) = *mtr_override;
        table(1, 0) = *mtr_override;
    }
    table(0, 0) = net.tx_.self_inductance;
    table(1, 1) = net.rx_.self_inductance;
    for (std::size_t r = 0; r < net.relays_.size(); ++r) {
        const auto k = static_cast<Eigen::Index>(r + 2);
        table(k, k) = net.relays_[r].coil.self_inductance;
    }
    net.table_ = std::make_shared<const Eigen::MatrixXd>(std::move(table));
    net.validate();
    return net;
}

void Network::validate() const {
    tx_.validate("tx");
    rx_.validate("rx");
    for (std::size_t r = 0; r < relays_.size(); ++r) {
        const std::string label = "relay " + std::to_string(r);
        relays_[r].coil.validate(label);
        validate_load(relays_[r].load, label);
    }
    if (design_frequency_ && !(*design_frequency_ > 0.0)) {
        throw ConfigError("design frequency must be positive");
    }
    const Eigen::MatrixXd& t = *table_;
    if (!t.allFinite()) {
        throw ModelConsistencyError("mutual inductance table contains non-finite entries");
    }
    auto coil_at = [&](Eigen::Index i) -> const Coil& {
        return i == 0 ? tx_ : i == 1 ? rx_ : relays_[static_cast<std::size_t>(i - 2)].coil;
    };
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < t.cols(); ++j) {
            if (t(i, j) != t(j, i)) {
                throw ModelConsistencyError("mutual inductance table is not symmetric");
            }
            coupling_coefficient_from(t(i, j), coil_at(i), coil_at(j));
        }
    }
}

double Network::mtr() const { return (*table_)(0, 1); }

Network Network::with_loads(std::vector<LoadState> loads) const {
    if (loads.size() != relays_.size()) {
        throw ConfigError("with_loads: one load per relay required");
    }
    Network out = *this;
    for (std::size_t r = 0; r < loads.size(); ++r) {
        validate_load(loads[r], "relay " + std::to_string(r));
        out.relays_[r].load = std::move(loads[r]);
    }
    return out;
}

Network Network::without_relay(std::size_t index) const {
    if (index >= relays_.size()) {
        throw std::out_of_range("without_relay: index out of range");
    }
    const auto n = static_cast<Eigen::Index>(relays_.size() + 2);
    const auto drop = static_cast<Eigen::Index>(index + 2);
    Eigen::MatrixXd t(n - 1, n - 1);
    for (Eigen::Index i = 0, ii = 0; i < n; ++i) {
        if (i == drop) {
            continue;
        }
        for (Eigen::Index j = 0, jj = 0; j < n; ++j) {
            if (j == drop) {
                continue;
            }
            t(ii, jj++) = (*table_)(i, j);
        }
        ++ii;
    }
    std::vector<Relay> relays = relays_;
    relays.erase(relays.begin() + static_cast<std::ptrdiff_t>(index));
    Network out;
    out.tx_ = tx_;
    out.rx_ = rx_;
    out.relays_ = std::move(relays);
    out.mtr_override_ = mtr_override_;
    out.design_frequency_ = design_frequency_;
    out.table_ = std::make_shared<const Eigen::MatrixXd>(std::move(t));
    return out;
}

std::vector<std::size_t> Network::active_relays(const SwitchState& state) const {
    if (state.size() != relays_.size()) {
        throw std::invalid_argument("switch state length " + std::to_string(state.size()) +
                                    " does not match relay count " +
                                    std::to_string(relays_.size()));
    }
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < relays_.size(); ++r) {
        if (state[r] && !is_open(relays_[r].load)) {
            out.push_back(r);
        }
    }
    return out;
}

std::vector<std::size_t> Network::active_relays() const {
    return active_relays(SwitchState::all_on(relays_.size()));
}

} // namespace mirelay
