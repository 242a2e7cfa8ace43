// SPDX-License-Identifier: Apache-2.0
#include "mirelay/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <random>
#include <unordered_map>

#include "mirelay/errors.hpp"
#include "mirelay/matching.hpp"
#include "mirelay/sweep.hpp"
#include "mirelay/switching.hpp"

namespace mirelay {

namespace {

constexpr double kInvalid = -std::numeric_limits<double>::infinity();

using FactorPtr = std::shared_ptr<const SwitchingEvaluator::Factor>;

struct Individual {
    SwitchState state;
    double eta = kInvalid;
    FactorPtr factor;
    FactorPtr source; ///< factor the child was evaluated from, kept until selection
};

void require_relays(const Network& net, const char* what) {
    if (net.relay_count() == 0) {
        throw DomainError(std::string(what) + " requires at least one relay");
    }
}

/// Strictly greater wins; equal values keep the earlier candidate.
bool better(double candidate, double incumbent) { return candidate > incumbent; }

} // namespace

void GaParams::validate() const {
    if (generations < 1) {
        throw ConfigError("genetic: generations must be >= 1");
    }
    if (survivors < 2) {
        throw ConfigError("genetic: survivors must be >= 2");
    }
    if (!(expected_flips > 0.0)) {
        throw ConfigError("genetic: expected_flips must be positive");
    }
    if (!(max_flip_probability > 0.0) || max_flip_probability > 1.0) {
        throw ConfigError("genetic: max_flip_probability must be in (0, 1]");
    }
}

GeneticResult optimize_genetic(const Network& net, double frequency, const GaParams& params) {
    params.validate();
    require_relays(net, "genetic optimization");
    const std::size_t n = net.relay_count();
    const SwitchingEvaluator eval(net, frequency);
    std::mt19937_64 rng(params.rng_seed);

    GeneticResult result;
    std::unordered_map<SwitchState, double, SwitchStateHash> seen;

    auto direct_or_invalid = [&](const SwitchState& s) {
        try {
            return eval.eta_direct(s);
        } catch (const ConditioningError&) {
            return kInvalid;
        }
    };
    auto factor_or_null = [&](const SwitchState& s) -> FactorPtr {
        try {
            return eval.factor(s);
        } catch (const ConditioningError&) {
            return nullptr;
        }
    };

    // Seed population: all relays closed, all open, then distinct random states.
    std::vector<Individual> population;
    {
        Individual all;
        all.state = SwitchState::all_on(n);
        all.eta = direct_or_invalid(all.state);
        all.factor = factor_or_null(all.state);
        result.eta_all = std::isfinite(all.eta) ? all.eta : std::numeric_limits<double>::quiet_NaN();
        seen.emplace(all.state, all.eta);
        population.push_back(std::move(all));

        Individual none;
        none.state = SwitchState::all_off(n);
        none.eta = eval.eta_direct(none.state);
        none.factor = eval.factor(none.state);
        result.eta_none = none.eta;
        seen.emplace(none.state, none.eta);
        population.push_back(std::move(none));
    }
    std::bernoulli_distribution coin(0.5);
    for (std::size_t attempt = 0; population.size() < params.survivors && attempt < 50 * params.survivors;
         ++attempt) {
        SwitchState s(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.set(i, coin(rng));
        }
        if (seen.contains(s)) {
            continue;
        }
        Individual ind;
        ind.state = s;
        ind.factor = factor_or_null(s);
        ind.eta = ind.factor ? eval.eta_from_g(ind.factor->g) : kInvalid;
        seen.emplace(s, ind.eta);
        population.push_back(std::move(ind));
    }

    auto rank = [](std::vector<Individual>& pool) {
        std::stable_sort(pool.begin(), pool.end(), [](const Individual& a, const Individual& b) {
            return a.eta > b.eta;
        });
    };
    rank(population);
    if (population.size() > params.survivors) {
        population.resize(params.survivors);
    }

    auto record = [&](std::size_t generation) {
        GaTraceRow row;
        row.generation = generation;
        row.best_eta = population.front().eta;
        row.best_active = net.active_relays(population.front().state).size();
        row.best_state = population.front().state.to_string();
        row.evaluations = seen.size();
        result.trace.push_back(std::move(row));
    };
    record(0);

    auto evaluate_child = [&](const SwitchState& child, const Individual* p1,
                              const Individual* p2) -> Individual {
        Individual out;
        out.state = child;
        const Individual* base = p1;
        if (p2 != nullptr && p2->factor &&
            (!p1->factor || hamming_distance(p2->state, child) < hamming_distance(p1->state, child))) {
            base = p2;
        }
        try {
            if (base->factor) {
                out.eta = eval.eta_from(*base->factor, child);
                out.source = base->factor;
            } else {
                out.eta = eval.eta_direct(child);
            }
        } catch (const ConditioningError&) {
            out.eta = kInvalid;
        }
        return out;
    };

    const double flip_p =
        std::min(params.expected_flips / static_cast<double>(n), params.max_flip_probability);
    std::bernoulli_distribution flip(flip_p);
    std::uniform_int_distribution<std::size_t> any_bit(0, n - 1);

    for (std::size_t gen = 1; gen <= params.generations; ++gen) {
        std::vector<Individual> children;
        const std::size_t parents = population.size();

        for (std::size_t k = 0; k < parents; ++k) {
            SwitchState child = population[k].state;
            bool flipped = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (flip(rng)) {
                    child.flip(i);
                    flipped = true;
                }
            }
            if (!flipped) {
                child.flip(any_bit(rng));
            }
            if (seen.contains(child)) {
                continue;
            }
            Individual ind = evaluate_child(child, &population[k], nullptr);
            seen.emplace(child, ind.eta);
            children.push_back(std::move(ind));
        }

        if (parents >= 2) {
            std::uniform_int_distribution<std::size_t> pick(0, parents - 1);
            for (std::size_t k = 0; k < params.recombined_per_generation; ++k) {
                const std::size_t a = pick(rng);
                std::size_t b = pick(rng);
                while (b == a) {
                    b = pick(rng);
                }
                SwitchState child(n);
                for (std::size_t i = 0; i < n; ++i) {
                    child.set(i, coin(rng) ? population[a].state[i] : population[b].state[i]);
                }
                if (seen.contains(child)) {
                    continue;
                }
                Individual ind = evaluate_child(child, &population[a], &population[b]);
                seen.emplace(child, ind.eta);
                children.push_back(std::move(ind));
            }
        }

        for (Individual& c : children) {
            population.push_back(std::move(c));
        }
        rank(population);
        if (population.size() > params.survivors) {
            population.resize(params.survivors);
        }
        for (Individual& ind : population) {
            if (!ind.factor && std::isfinite(ind.eta)) {
                try {
                    ind.factor = ind.source ? eval.factor_from(*ind.source, ind.state)
                                            : eval.factor(ind.state);
                } catch (const ConditioningError&) {
                    ind.factor = nullptr;
                }
            }
            ind.source.reset();
        }
        record(gen);
    }

    // Re-evaluate the leaders through the public path so the returned eta
    // does not carry update round-off; the seeds keep their exact values.
    SwitchState best_state = SwitchState::all_off(n);
    double best_eta = kInvalid;
    const std::size_t leaders = std::min<std::size_t>(5, population.size());
    for (std::size_t k = 0; k < leaders; ++k) {
        const double eta = direct_or_invalid(population[k].state);
        if (better(eta, best_eta)) {
            best_eta = eta;
            best_state = population[k].state;
        }
    }
    if (std::isfinite(result.eta_all) && better(result.eta_all, best_eta)) {
        best_eta = result.eta_all;
        best_state = SwitchState::all_on(n);
    }
    if (better(result.eta_none, best_eta)) {
        best_eta = result.eta_none;
        best_state = SwitchState::all_off(n);
    }
    result.state = std::move(best_state);
    result.eta = best_eta;
    result.evaluations = seen.size();
    result.full_factorizations = eval.full_factorizations();
    result.incremental_updates = eval.incremental_updates();
    return result;
}

IndexResult optimize_one_relay(const Network& net, double frequency) {
    require_relays(net, "1-relay scheme");
    const std::size_t n = net.relay_count();
    IndexResult best{0, kInvalid};
    for (std::size_t r = 0; r < n; ++r) {
        double eta = kInvalid;
        try {
            eta = power_gain(rho_chi(effective_two_port(net, frequency, SwitchState::single(n, r))));
        } catch (const ConditioningError&) {
        }
        if (better(eta, best.eta)) {
            best = {r, eta};
        }
    }
    if (!std::isfinite(best.eta)) {
        throw ConditioningError("1-relay scheme: every candidate failed", frequency);
    }
    return best;
}

IndexResult optimize_n_minus_one(const Network& net, double frequency) {
    require_relays(net, "N-1 scheme");
    const std::size_t n = net.relay_count();
    const SwitchingEvaluator eval(net, frequency);

    auto direct = [&](std::size_t r) {
        try {
            return eval.eta_direct(SwitchState::all_but(n, r));
        } catch (const ConditioningError&) {
            return kInvalid;
        }
    };

    std::vector<double> estimate(n, kInvalid);
    bool have_estimates = true;
    try {
        const FactorPtr all = eval.factor(SwitchState::all_on(n));
        for (std::size_t r = 0; r < n; ++r) {
            const Eigen::Index i = all->position(r);
            const cplx prr = i < 0 ? cplx(0.0) : all->p(i, i);
            Eigen::Matrix2cd g = all->g;
            if (prr != cplx(0.0)) {
                const Eigen::RowVector2cd ur = all->u.row(i);
                g -= ur.transpose() * ur / prr;
            }
            try {
                estimate[r] = eval.eta_from_g(g);
            } catch (const Error&) {
                estimate[r] = kInvalid;
            }
            if (!std::isfinite(estimate[r])) {
                estimate[r] = kInvalid;
            }
        }
    } catch (const ConditioningError&) {
        have_estimates = false;
    }

    IndexResult best{0, kInvalid};
    if (have_estimates) {
        const double lead = *std::max_element(estimate.begin(), estimate.end());
        if (std::isfinite(lead)) {
            const double cutoff = lead - 1e-7 * std::abs(lead);
            for (std::size_t r = 0; r < n; ++r) {
                if (estimate[r] >= cutoff) {
                    const double eta = direct(r);
                    if (better(eta, best.eta)) {
                        best = {r, eta};
                    }
                }
            }
        }
    }
    if (!std::isfinite(best.eta)) {
        for (std::size_t r = 0; r < n; ++r) {
            const double eta = direct(r);
            if (better(eta, best.eta)) {
                best = {r, eta};
            }
        }
    }
    if (!std::isfinite(best.eta)) {
        throw ConditioningError("N-1 scheme: every candidate failed", frequency);
    }
    return best;
}

FrequencyResult optimize_frequency(const Network& net, const FrequencyBand& band,
                                   std::size_t grid_points, const SwitchState& state) {
    if (!(band.lo > 0.0) || !(band.lo < band.hi)) {
        throw DomainError("frequency band must satisfy 0 < f_lo < f_hi");
    }
    if (grid_points < 2) {
        throw DomainError("frequency grid needs at least 2 points");
    }
    const FrequencyEvaluator evaluator(net, state);
    FrequencyResult result;
    std::optional<ConditioningError> last_error;

    auto eval = [&](double f) {
        ++result.evaluations;
        try {
            return evaluator.eta(f);
        } catch (const ConditioningError& e) {
            ++result.failed_points;
            last_error = e;
            return kInvalid;
        }
    };

    std::vector<double> grid(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        grid[i] = band.lo + (band.hi - band.lo) * static_cast<double>(i) /
                                static_cast<double>(grid_points - 1);
    }
    grid.back() = band.hi;
    if (const auto& f0 = net.design_frequency(); f0 && *f0 >= band.lo && *f0 <= band.hi) {
        grid.insert(std::upper_bound(grid.begin(), grid.end(), *f0), *f0);
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }

    std::vector<double> values(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = eval(grid[i]);
        if (better(values[i], values[best])) {
            best = i;
        }
    }
    if (!std::isfinite(values[best])) {
        throw *last_error;
    }
    double best_f = grid[best];
    double best_eta = values[best];

    auto consider = [&](double f, double eta) {
        if (better(eta, best_eta) || (eta == best_eta && f < best_f)) {
            best_f = f;
            best_eta = eta;
        }
    };

    // Golden-section refinement between the neighbours of the best grid point.
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    consider(c, fc);
    consider(d, fd);
    for (int it = 0; it < 200 && (b - a) > 1e-10 * best_f; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d);
            consider(d, fd);
        }
    }

    result.frequency = best_f;
    result.eta = best_eta;
    return result;
}

FrequencyResult optimize_frequency(const Network& net, const FrequencyBand& band,
                                   std::size_t grid_points) {
    return optimize_frequency(net, band, grid_points, SwitchState::all_on(net.relay_count()));
}

void write_trace_csv(std::ostream& os, const std::vector<GaTraceRow>& trace) {
    const auto old_precision = os.precision(17);
    os << "generation,best_eta,best_eta_db,best_active,evaluations,state\n";
    for (const GaTraceRow& row : trace) {
        os << row.generation << ',' << row.best_eta << ',' << to_db(row.best_eta) << ','
           << row.best_active << ',' << row.evaluations << ',' << row.best_state << '\n';
    }
    os.precision(old_precision);
}

} // namespace mirelay
