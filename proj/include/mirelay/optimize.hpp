// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mirelay/circuit.hpp"

namespace mirelay {

/// Genetic load-switching parameters.
///
/// Each generation every survivor spawns one mutated child (independent
/// per-bit flips with probability min(expected_flips / N, max_flip_probability),
/// at least one flip) and `recombined_per_generation` children are made by
/// uniform crossover of two distinct random survivors. The best `survivors`
/// states of parents and children are kept (elitist).
struct GaParams {
    std::size_t generations = 500;
    std::size_t survivors = 20;
    std::size_t recombined_per_generation = 4;
    double expected_flips = 3.0;
    double max_flip_probability = 0.5;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct GaTraceRow {
    std::size_t generation = 0;
    double best_eta = 0.0;
    std::size_t best_active = 0;
    std::string best_state;
    std::size_t evaluations = 0; ///< cumulative distinct states evaluated
};

struct GeneticResult {
    SwitchState state;
    double eta = 0.0;      ///< evaluated through effective_two_port
    double eta_all = 0.0;  ///< all relays closed
    double eta_none = 0.0; ///< all relays open
    std::size_t evaluations = 0;
    std::size_t full_factorizations = 0;
    std::size_t incremental_updates = 0;
    std::vector<GaTraceRow> trace;
};

/// Requires N >= 1. Deterministic given params.rng_seed.
GeneticResult optimize_genetic(const Network& net, double frequency, const GaParams& params);

struct IndexResult {
    std::size_t index = 0;
    double eta = 0.0;
};

/// Best single active relay (exhaustive over N); smallest index wins ties.
IndexResult optimize_one_relay(const Network& net, double frequency);

/// Best single relay to open with all others closed; smallest index wins ties.
/// Candidates are ranked by a rank-one downdate of the all-on inverse and
/// the leaders are re-evaluated through effective_two_port.
IndexResult optimize_n_minus_one(const Network& net, double frequency);

struct FrequencyBand {
    double lo = 0.0;
    double hi = 0.0;

    /// f0 * (1 - rel), f0 * (1 + rel)
    static FrequencyBand around(double f0, double rel = 0.1) {
        return {f0 * (1.0 - rel), f0 * (1.0 + rel)};
    }
};

struct FrequencyResult {
    double frequency = 0.0;
    double eta = 0.0;
    std::size_t evaluations = 0;
    std::size_t failed_points = 0;
};

/// Grid scan over `band` (plus the network's design frequency when it lies
/// in the band) followed by golden-section refinement between the grid
/// neighbours of the best point. Relay capacitors stay at their design
/// values. Ties go to the lowest frequency.
FrequencyResult optimize_frequency(const Network& net, const FrequencyBand& band,
                                   std::size_t grid_points, const SwitchState& state);
FrequencyResult optimize_frequency(const Network& net, const FrequencyBand& band,
                                   std::size_t grid_points = 401);

/// Writes generation,best_eta,best_eta_db,best_active,evaluations,state
void write_trace_csv(std::ostream& os, const std::vector<GaTraceRow>& trace);

} // namespace mirelay
