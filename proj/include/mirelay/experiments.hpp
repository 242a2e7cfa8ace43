// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mirelay/config.hpp"
#include "mirelay/network.hpp"

namespace mirelay {

/// Counter-based seed splitting (splitmix64 finalizer over master ^ counter).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t counter);

/// Seed of trial `trial` at density index `density_index`.
std::uint64_t trial_seed(std::uint64_t master, std::size_t density_index, std::size_t trial);

/// Draws the network of one trial. Scenario decides Tx/Rx orientation and
/// the M_tr override.
Network sample_trial_network(const ExperimentConfig& cfg, double density, std::uint64_t seed);

struct SchemeOutcome {
    Scheme scheme = Scheme::none;
    double eta = 0.0;
    double eta_db = 0.0;
    double gain_db = 0.0;   ///< eta_db - eta_db(none) of the same trial
    double frequency = 0.0; ///< operating frequency [Hz]
    std::optional<std::size_t> relay_index; ///< one_relay / n_minus_one choice
    std::string state;      ///< genetic switch state, '1' = closed
    std::size_t active_relays = 0;
};

struct TrialRecord {
    std::size_t density_index = 0;
    double density = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t relay_count = 0;
    bool excluded = false;
    std::string exclusion_reason;
    double eta_none = 0.0;
    std::vector<SchemeOutcome> outcomes; ///< one per configured scheme, in config order

    const SchemeOutcome* find(Scheme s) const;
};

/// Runs all schemes on one network. Throws on numerical failure.
TrialRecord evaluate_trial(const ExperimentConfig& cfg, const Network& net);

/// Runs one trial (sampling plus evaluation); failures come back excluded.
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t density_index, std::size_t trial);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Worker count after applying the MIRELAY_MAX_WORKERS cap; 0 means
/// available parallelism.
std::size_t resolve_workers(std::size_t requested);

/// All densities x trials, ordered by (density index, trial) whatever the
/// worker count.
std::vector<TrialRecord> run_cdf_experiment(const ExperimentConfig& cfg,
                                            const ProgressFn& progress = {});

double noise_power(double bandwidth, double temperature, double noise_figure_db);

/// B log2(1 + eta P_t / (k_B T B 10^(NF/10))) [bit/s]
double achievable_rate(double eta, double tx_power, double bandwidth, double temperature,
                       double noise_figure_db);
double achievable_rate(double eta, const RateParams& p);

struct ResponsePoint {
    double frequency = 0.0;
    double eta = 0.0;
    bool failed = false;
};

/// eta over an evenly spaced grid including both band edges. Conditioning
/// failures are flagged per point with eta = NaN.
std::vector<ResponsePoint> frequency_response(const Network& net, const FrequencyBand& band,
                                              std::size_t grid_points, const SwitchState& state);

struct ResponseComparison {
    std::vector<ResponsePoint> all_on;
    std::optional<std::vector<ResponsePoint>> alternative;
};

ResponseComparison frequency_response(const Network& net, const FrequencyBand& band,
                                      std::size_t grid_points,
                                      const std::optional<SwitchState>& alternative = std::nullopt);

struct SchemeSummary {
    double density = 0.0;
    Scheme scheme = Scheme::none;
    std::size_t used = 0;
    std::size_t excluded = 0;
    std::vector<double> eta_db;   ///< per used trial, trial order
    std::vector<double> gain_db;
    std::vector<double> rate;
};

/// Groups included trials per (density, scheme) in config order.
std::vector<SchemeSummary> summarize(const ExperimentConfig& cfg,
                                     const std::vector<TrialRecord>& trials);

struct RatePoint {
    double density = 0.0;
    Scheme scheme = Scheme::none;
    double mean_rate = 0.0;
    double outage_rate = 0.0; ///< empirical 1st percentile
};

std::vector<RatePoint> rate_vs_density(const ExperimentConfig& cfg,
                                       const std::vector<TrialRecord>& trials);

/// Percentiles reported in summary.csv.
inline constexpr double kSummaryPercentiles[] = {1, 10, 25, 50, 75, 90, 99};

std::size_t excluded_count(const std::vector<TrialRecord>& trials);

void write_trials_csv(std::ostream& os, const ExperimentConfig& cfg,
                      const std::vector<TrialRecord>& trials);
void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg,
                       const std::vector<TrialRecord>& trials);
void write_rates_csv(std::ostream& os, const std::vector<RatePoint>& rates);
void write_exclusions_csv(std::ostream& os, const std::vector<TrialRecord>& trials);
void write_response_csv(std::ostream& os, const ResponseComparison& r);

struct ResponseExperiment {
    Network network;
    double eta_all = 0.0;      ///< at f0
    double eta_genetic = 0.0;  ///< at f0
    SwitchState genetic_state;
    ResponseComparison response;
};

/// Draws trial `cfg.response_trial` at the first density, optimizes it with
/// the genetic scheme and sweeps both the all-on and optimized states.
ResponseExperiment run_response_experiment(const ExperimentConfig& cfg);

/// Two-column gnuplot blocks (x, P(X <= x)), one indexed block per curve.
void write_ecdf_dat(std::ostream& os, const std::vector<SchemeSummary>& groups, bool gain);

/// Writes trials.csv, summary.csv, rates.csv, exclusions.csv, eta_cdf.dat
/// and gain_cdf.dat into `dir`.
void write_cdf_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                       const std::vector<TrialRecord>& trials);

/// Writes response.csv, response_all.dat, response_genetic.dat and network.json.
void write_response_outputs(const std::filesystem::path& dir, const ResponseExperiment& r);

} // namespace mirelay
