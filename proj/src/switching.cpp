// SPDX-License-Identifier: Apache-2.0
#include "mirelay/switching.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"
#include "mirelay/linalg.hpp"
#include "mirelay/matching.hpp"

namespace mirelay {

using Index = Eigen::Index;
using IndexList = std::vector<Index>;

struct SwitchingEvaluator::Delta {
    IndexList removed;
    IndexList added;
    std::size_t size() const { return removed.size() + added.size(); }
};

SwitchingEvaluator::SwitchingEvaluator(const Network& net, double frequency, Options opts)
    : net_(net), frequency_(frequency), omega_(constants::angular(frequency)), opts_(opts) {
    direct_ = direct_two_port(net_, frequency_);
    const std::size_t n = net_.relay_count();
    const auto ni = static_cast<Index>(n);
    usable_.resize(n);
    z_full_.resize(ni, ni);
    mt_.resize(ni, 2);
    for (std::size_t r = 0; r < n; ++r) {
        const Relay& relay = net_.relays()[r];
        const auto i = static_cast<Index>(r);
        usable_[r] = !is_open(relay.load);
        cplx diag(relay.coil.resistance, omega_ * relay.coil.self_inductance);
        if (usable_[r]) {
            diag += load_impedance(relay.load, omega_);
        }
        z_full_(i, i) = diag;
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx zrc(0.0, omega_ * net_.mrr(r, c));
            z_full_(i, static_cast<Index>(c)) = zrc;
            z_full_(static_cast<Index>(c), i) = zrc;
        }
        mt_(i, 0) = net_.mtx(r);
        mt_(i, 1) = net_.mrx(r);
    }
}

std::size_t SwitchingEvaluator::max_delta() const {
    if (opts_.max_delta != 0) {
        return opts_.max_delta;
    }
    return std::max<std::size_t>(4, net_.relay_count() / 6);
}

double SwitchingEvaluator::eta_direct(const SwitchState& state) const {
    ++full_count_;
    return power_gain(rho_chi(effective_two_port(net_, frequency_, state)));
}

double SwitchingEvaluator::eta_from_g(const Eigen::Matrix2cd& g) const {
    TwoPortZ z = direct_;
    const double w2 = omega_ * omega_;
    z.z11 += w2 * g(0, 0);
    z.z21 += w2 * g(1, 0);
    z.z22 += w2 * g(1, 1);
    return power_gain(rho_chi(z));
}

Eigen::Index SwitchingEvaluator::Factor::position(std::size_t relay) const {
    const auto r = static_cast<Index>(relay);
    const auto it = std::lower_bound(active.begin(), active.end(), r);
    return it != active.end() && *it == r ? static_cast<Index>(it - active.begin()) : -1;
}

SwitchingEvaluator::Delta SwitchingEvaluator::delta(const Factor& from,
                                                    const SwitchState& to) const {
    if (to.size() != net_.relay_count()) {
        throw std::invalid_argument("switch state length does not match relay count");
    }
    Delta d;
    for (std::size_t r = 0; r < to.size(); ++r) {
        const bool was = active(from.state, r);
        const bool is = active(to, r);
        if (was && !is) {
            d.removed.push_back(from.position(r));
        } else if (!was && is) {
            d.added.push_back(static_cast<Index>(r));
        }
    }
    return d;
}

std::shared_ptr<const SwitchingEvaluator::Factor>
SwitchingEvaluator::factor(const SwitchState& state) const {
    ++full_count_;
    auto f = std::make_shared<Factor>();
    f->state = state;
    for (std::size_t r = 0; r < state.size(); ++r) {
        if (active(state, r)) {
            f->active.push_back(static_cast<Index>(r));
        }
    }
    if (f->active.empty()) {
        f->g = Eigen::Matrix2cd::Zero();
        return f;
    }
    const GuardedLu lu(z_full_(f->active, f->active), frequency_);
    f->p = lu.inverse();
    f->u = f->p * mt_(f->active, Eigen::all);
    f->g = mt_(f->active, Eigen::all).transpose() * f->u;
    return f;
}

double SwitchingEvaluator::eta_from(const Factor& from, const SwitchState& state) const {
    const Delta d = delta(from, state);
    if (d.size() == 0) {
        return eta_from_g(from.g);
    }
    if (d.size() > max_delta()) {
        return eta_direct(state);
    }
    try {
        ++update_count_;
        Eigen::Matrix2cd g = from.g;
        Eigen::MatrixXcd u = from.u;
        Eigen::MatrixXcd p_col;
        std::optional<GuardedLu> prr_lu;
        if (!d.removed.empty()) {
            p_col = from.p(Eigen::all, d.removed);
            prr_lu.emplace(p_col(d.removed, Eigen::all), frequency_);
            const Eigen::MatrixXcd ur = from.u(d.removed, Eigen::all);
            const Eigen::MatrixXcd prr_inv_ur = prr_lu->solve(ur);
            g -= ur.transpose() * prr_inv_ur;
            u.noalias() -= p_col * prr_inv_ur;
            u(d.removed, Eigen::all).setZero();
        }
        if (!d.added.empty()) {
            const Eigen::MatrixXcd b = z_full_(from.active, d.added);
            Eigen::MatrixXcd y = from.p * b;
            if (!d.removed.empty()) {
                y.noalias() -= p_col * prr_lu->solve(p_col.transpose() * b);
                y(d.removed, Eigen::all).setZero();
            }
            const Eigen::MatrixXcd s = z_full_(d.added, d.added) - b.transpose() * y;
            const Eigen::MatrixXcd t = mt_(d.added, Eigen::all) - b.transpose() * u;
            const GuardedLu s_lu(s, frequency_);
            g += t.transpose() * s_lu.solve(t);
        }
        if (!g.allFinite()) {
            return eta_direct(state);
        }
        return eta_from_g(g);
    } catch (const ConditioningError&) {
        return eta_direct(state);
    }
}

std::shared_ptr<const SwitchingEvaluator::Factor>
SwitchingEvaluator::factor_from(const Factor& from, const SwitchState& state) const {
    const Delta d = delta(from, state);
    if (d.size() == 0) {
        auto f = std::make_shared<Factor>(from);
        f->state = state;
        return f;
    }
    if (d.size() > max_delta() || from.depth + 1 > opts_.max_update_depth) {
        return factor(state);
    }
    try {
        ++update_count_;
        const auto na = static_cast<Index>(from.active.size());
        const auto ka = static_cast<Index>(d.added.size());
        // Work over from.active followed by the added relays.
        Eigen::MatrixXcd e(na + ka, na + ka);
        e.topLeftCorner(na, na) = from.p;
        if (!d.removed.empty()) {
            const Eigen::MatrixXcd p_col = from.p(Eigen::all, d.removed);
            const GuardedLu prr_lu(p_col(d.removed, Eigen::all), frequency_);
            e.topLeftCorner(na, na).noalias() -= p_col * prr_lu.solve(p_col.transpose());
            e(d.removed, Eigen::all).setZero();
            e(Eigen::all, d.removed).setZero();
        }
        if (ka > 0) {
            const Eigen::MatrixXcd b = z_full_(from.active, d.added);
            const Eigen::MatrixXcd y = e.topLeftCorner(na, na) * b;
            const Eigen::MatrixXcd s = z_full_(d.added, d.added) - b.transpose() * y;
            const GuardedLu s_lu(s, frequency_);
            const Eigen::MatrixXcd s_inv = s_lu.inverse();
            const Eigen::MatrixXcd ys = y * s_inv;
            e.topLeftCorner(na, na).noalias() += ys * y.transpose();
            e.topRightCorner(na, ka) = -ys;
            e.bottomLeftCorner(ka, na) = -ys.transpose();
            e.bottomRightCorner(ka, ka) = s_inv;
        }

        auto f = std::make_shared<Factor>();
        f->state = state;
        f->depth = from.depth + 1;
        std::vector<std::pair<Index, Index>> keep; // relay, row in e
        std::size_t next_removed = 0;
        for (Index i = 0; i < na; ++i) {
            if (next_removed < d.removed.size() && d.removed[next_removed] == i) {
                ++next_removed;
                continue;
            }
            keep.emplace_back(from.active[static_cast<std::size_t>(i)], i);
        }
        for (Index a = 0; a < ka; ++a) {
            keep.emplace_back(d.added[static_cast<std::size_t>(a)], na + a);
        }
        std::sort(keep.begin(), keep.end());
        std::vector<Index> rows;
        for (const auto& [relay, row] : keep) {
            f->active.push_back(relay);
            rows.push_back(row);
        }
        if (f->active.empty()) {
            f->g = Eigen::Matrix2cd::Zero();
            return f;
        }
        f->p = e(rows, rows);
        const Eigen::MatrixXcd m = mt_(f->active, Eigen::all);
        f->u = f->p * m;
        f->g = m.transpose() * f->u;
        if (!f->g.allFinite()) {
            return factor(state);
        }
        return f;
    } catch (const ConditioningError&) {
        return factor(state);
    }
}

} // namespace mirelay
