// SPDX-License-Identifier: Apache-2.0
#include "mirelay/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "mirelay/constants.hpp"
#include "mirelay/errors.hpp"
#include "mirelay/matching.hpp"
#include "mirelay/network_io.hpp"
#include "mirelay/sampling.hpp"
#include "mirelay/stats.hpp"
#include "mirelay/sweep.hpp"

namespace mirelay {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double eta_at(const Network& net, double f, const SwitchState& s) {
    return power_gain(rho_chi(effective_two_port(net, f, s)));
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + p.string());
    }
    return out;
}

/// canonical_pair() depends only on the config, so trials share one result.
CanonicalPair cached_pair(const ExperimentConfig& cfg) {
    static std::mutex mu;
    static std::map<std::string, CanonicalPair> cache;
    const bool tilted = cfg.misalignment_model == MisalignmentModel::tilted;
    const std::string key = fmt(cfg.tx_rx_distance) + '|' + fmt(cfg.misalignment_db) + '|' +
                            (tilted ? "t|" : "o|") + fmt(cfg.coil.radius) + '|' +
                            std::to_string(cfg.coil.turns) + '|' +
                            fmt(cfg.coil.self_inductance) + '|' + fmt(cfg.coil.resistance) + '|' +
                            std::to_string(cfg.quadrature.initial_points) + '|' +
                            std::to_string(cfg.quadrature.max_points) + '|' +
                            fmt(cfg.quadrature.rel_tol);
    const std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) {
        return it->second;
    }
    CanonicalPair pair = canonical_pair(cfg.tx_rx_distance,
                                        tilted ? Alignment::tilted(cfg.misalignment_db)
                                               : Alignment::misaligned(cfg.misalignment_db),
                                        cfg.coil, cfg.quadrature);
    cache.emplace(key, pair);
    return pair;
}

} // namespace

std::uint64_t split_seed(std::uint64_t master, std::uint64_t counter) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t density_index, std::size_t trial) {
    const std::uint64_t counter =
        (static_cast<std::uint64_t>(density_index) << 40) | static_cast<std::uint64_t>(trial);
    return split_seed(master, counter);
}

Network sample_trial_network(const ExperimentConfig& cfg, double density, std::uint64_t seed) {
    SamplingConfig sc;
    sc.tx_rx_distance = cfg.tx_rx_distance;
    sc.relay_density = density;
    sc.fixed_relay_count = cfg.fixed_relay_count;
    sc.rng_seed = seed;
    sc.min_coil_separation = cfg.min_coil_separation;
    sc.relay_coil = cfg.coil;
    sc.design_frequency = cfg.f0;
    sc.quadrature = cfg.quadrature;

    EndpointRule tx{Vec3::UnitZ(), cfg.coil};
    EndpointRule rx{Vec3::UnitZ(), cfg.coil};
    std::optional<double> mtr;
    switch (cfg.scenario) {
    case Scenario::coaxial:
        break;
    case Scenario::misaligned:
        if (cfg.misalignment_model == MisalignmentModel::oriented) {
            std::mt19937_64 rng(split_seed(seed, 0x6d69));
            const OrientedPair pair =
                misaligned_orientations(cfg.tx_rx_distance, cfg.misalignment_db,
                                        cfg.misalignment_window_db, rng, cfg.coil, cfg.quadrature);
            tx.orientation = pair.tx.orientation;
            rx.orientation = pair.rx.orientation;
            mtr = pair.mtr_target;
        } else {
            const CanonicalPair pair = cached_pair(cfg);
            tx.orientation = pair.tx.orientation;
            rx.orientation = pair.rx.orientation;
            mtr = pair.mtr_override;
        }
        break;
    case Scenario::random_orientations:
        tx.orientation.reset();
        rx.orientation.reset();
        break;
    }
    return sample_network(sc, tx, rx, mtr);
}

const SchemeOutcome* TrialRecord::find(Scheme s) const {
    for (const SchemeOutcome& o : outcomes) {
        if (o.scheme == s) {
            return &o;
        }
    }
    return nullptr;
}

TrialRecord evaluate_trial(const ExperimentConfig& cfg, const Network& net) {
    const double f0 = cfg.f0;
    const std::size_t n = net.relay_count();
    TrialRecord rec;
    rec.relay_count = n;
    rec.eta_none = eta_at(net, f0, SwitchState::all_off(n));
    const double none_db = to_db(rec.eta_none);

    std::optional<double> eta_all;
    auto all_on = [&] {
        if (!eta_all) {
            eta_all = eta_at(net, f0, SwitchState::all_on(n));
        }
        return *eta_all;
    };

    for (Scheme scheme : cfg.schemes) {
        SchemeOutcome o;
        o.scheme = scheme;
        o.frequency = f0;
        switch (scheme) {
        case Scheme::none:
            o.eta = rec.eta_none;
            break;
        case Scheme::all:
            o.eta = all_on();
            o.active_relays = n;
            break;
        case Scheme::one_relay:
            if (n == 0) {
                o.eta = rec.eta_none;
            } else {
                const IndexResult r = optimize_one_relay(net, f0);
                o.eta = r.eta;
                o.relay_index = r.index;
                o.active_relays = 1;
            }
            break;
        case Scheme::n_minus_one:
            if (n == 0) {
                o.eta = rec.eta_none;
            } else {
                const IndexResult r = optimize_n_minus_one(net, f0);
                o.eta = r.eta;
                o.relay_index = r.index;
                o.active_relays = n - 1;
            }
            break;
        case Scheme::freq_tuning: {
            const FrequencyResult r =
                optimize_frequency(net, cfg.effective_band(), cfg.grid_points, SwitchState::all_on(n));
            o.eta = r.eta;
            o.frequency = r.frequency;
            o.active_relays = n;
            const FrequencyBand band = cfg.effective_band();
            if (f0 >= band.lo && f0 <= band.hi && all_on() > o.eta) {
                o.eta = all_on();
                o.frequency = f0;
            }
            break;
        }
        case Scheme::genetic:
            if (n == 0) {
                o.eta = rec.eta_none;
            } else {
                GaParams ga = cfg.genetic;
                ga.rng_seed = split_seed(cfg.seed ^ rec.relay_count, 0x6761);
                const GeneticResult r = optimize_genetic(net, f0, ga);
                o.eta = r.eta;
                o.state = r.state.to_string();
                o.active_relays = r.state.count();
            }
            break;
        }
        if (!std::isfinite(o.eta)) {
            throw ModelConsistencyError("scheme " + to_string(scheme) + " produced non-finite eta");
        }
        o.eta_db = to_db(o.eta);
        o.gain_db = scheme == Scheme::none ? 0.0 : o.eta_db - none_db;
        rec.outcomes.push_back(std::move(o));
    }
    return rec;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t density_index, std::size_t trial) {
    const double density = cfg.relay_densities.at(density_index);
    const std::uint64_t seed = trial_seed(cfg.seed, density_index, trial);
    TrialRecord rec;
    try {
        ExperimentConfig local = cfg;
        local.seed = seed;
        rec = evaluate_trial(local, sample_trial_network(cfg, density, seed));
    } catch (const ConditioningError& e) {
        rec = TrialRecord{};
        rec.excluded = true;
        rec.exclusion_reason = std::string(e.what()) + " at " + fmt(e.frequency()) + " Hz";
    } catch (const std::exception& e) {
        rec = TrialRecord{};
        rec.excluded = true;
        rec.exclusion_reason = e.what();
    }
    rec.density_index = density_index;
    rec.density = density;
    rec.trial = trial;
    rec.seed = seed;
    return rec;
}

std::size_t resolve_workers(std::size_t requested) {
    std::size_t w = requested;
    if (w == 0) {
        w = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char* cap = std::getenv("MIRELAY_MAX_WORKERS"); cap != nullptr && *cap != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(cap, &end, 10);
        if (end == cap || *end != '\0' || v == 0) {
            throw ConfigError("MIRELAY_MAX_WORKERS must be a positive integer");
        }
        w = std::min<std::size_t>(w, static_cast<std::size_t>(v));
    }
    return w;
}

std::vector<TrialRecord> run_cdf_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const std::size_t per = cfg.trials;
    const std::size_t total = per * cfg.relay_densities.size();
    std::vector<TrialRecord> out(total);
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= total) {
                return;
            }
            out[k] = run_trial(cfg, k / per, k % per);
            if (progress) {
                const std::lock_guard lock(mu);
                progress(++done, total);
            }
        }
    };

    const std::size_t workers = std::min(resolve_workers(cfg.workers), total);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
    }
    return out;
}

double noise_power(double bandwidth, double temperature, double noise_figure_db) {
    return constants::boltzmann * temperature * bandwidth * std::pow(10.0, noise_figure_db / 10.0);
}

double achievable_rate(double eta, double tx_power, double bandwidth, double temperature,
                       double noise_figure_db) {
    if (!(tx_power > 0.0) || !(bandwidth > 0.0) || !(temperature > 0.0) || !(eta >= 0.0)) {
        throw DomainError("achievable_rate: need eta >= 0 and positive power, bandwidth, temperature");
    }
    return bandwidth *
           std::log2(1.0 + eta * tx_power / noise_power(bandwidth, temperature, noise_figure_db));
}

double achievable_rate(double eta, const RateParams& p) {
    return achievable_rate(eta, p.tx_power, p.bandwidth, p.temperature, p.noise_figure_db);
}

std::vector<ResponsePoint> frequency_response(const Network& net, const FrequencyBand& band,
                                              std::size_t grid_points, const SwitchState& state) {
    if (!(band.lo > 0.0) || !(band.lo < band.hi) || grid_points < 2) {
        throw DomainError("frequency_response: need 0 < lo < hi and at least 2 points");
    }
    const FrequencyEvaluator eval(net, state);
    std::vector<ResponsePoint> out(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        ResponsePoint& p = out[i];
        p.frequency = i + 1 == grid_points
                          ? band.hi
                          : band.lo + (band.hi - band.lo) * static_cast<double>(i) /
                                          static_cast<double>(grid_points - 1);
        try {
            p.eta = eval.eta(p.frequency);
        } catch (const ConditioningError&) {
            p.eta = std::numeric_limits<double>::quiet_NaN();
            p.failed = true;
        }
    }
    return out;
}

ResponseComparison frequency_response(const Network& net, const FrequencyBand& band,
                                      std::size_t grid_points,
                                      const std::optional<SwitchState>& alternative) {
    ResponseComparison r;
    r.all_on = frequency_response(net, band, grid_points, SwitchState::all_on(net.relay_count()));
    if (alternative) {
        r.alternative = frequency_response(net, band, grid_points, *alternative);
    }
    return r;
}

ResponseExperiment run_response_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::uint64_t seed = trial_seed(cfg.seed, 0, cfg.response_trial);
    Network net = sample_trial_network(cfg, cfg.relay_densities.front(), seed);
    const std::size_t n = net.relay_count();
    ResponseExperiment r{net, 0.0, 0.0, SwitchState::all_on(n), {}};
    r.eta_all = eta_at(net, cfg.f0, SwitchState::all_on(n));
    if (n > 0) {
        GaParams ga = cfg.genetic;
        ga.rng_seed = split_seed(seed ^ n, 0x6761);
        const GeneticResult g = optimize_genetic(net, cfg.f0, ga);
        r.genetic_state = g.state;
        r.eta_genetic = g.eta;
    } else {
        r.eta_genetic = r.eta_all;
    }
    r.response = frequency_response(net, cfg.effective_band(), cfg.grid_points, std::optional<SwitchState>(r.genetic_state));
    return r;
}

std::vector<SchemeSummary> summarize(const ExperimentConfig& cfg,
                                     const std::vector<TrialRecord>& trials) {
    std::vector<SchemeSummary> out;
    for (std::size_t d = 0; d < cfg.relay_densities.size(); ++d) {
        for (Scheme s : cfg.schemes) {
            SchemeSummary g;
            g.density = cfg.relay_densities[d];
            g.scheme = s;
            for (const TrialRecord& t : trials) {
                if (t.density_index != d) {
                    continue;
                }
                if (t.excluded) {
                    ++g.excluded;
                    continue;
                }
                const SchemeOutcome* o = t.find(s);
                if (o == nullptr) {
                    continue;
                }
                ++g.used;
                g.eta_db.push_back(o->eta_db);
                g.gain_db.push_back(o->gain_db);
                g.rate.push_back(achievable_rate(o->eta, cfg.rate));
            }
            out.push_back(std::move(g));
        }
    }
    return out;
}

std::vector<RatePoint> rate_vs_density(const ExperimentConfig& cfg,
                                       const std::vector<TrialRecord>& trials) {
    std::vector<RatePoint> out;
    for (const SchemeSummary& g : summarize(cfg, trials)) {
        if (g.rate.empty()) {
            continue;
        }
        out.push_back({g.density, g.scheme, mean(g.rate), percentile(g.rate, 1.0)});
    }
    return out;
}

std::size_t excluded_count(const std::vector<TrialRecord>& trials) {
    return static_cast<std::size_t>(
        std::count_if(trials.begin(), trials.end(), [](const TrialRecord& t) { return t.excluded; }));
}

void write_trials_csv(std::ostream& os, const ExperimentConfig& cfg,
                      const std::vector<TrialRecord>& trials) {
    os << "density_index,density,trial,seed,relays,excluded,eta_no_relays";
    for (Scheme s : cfg.schemes) {
        const std::string n = to_string(s);
        os << ",eta_" << n << ",eta_db_" << n << ",gain_db_" << n << ",freq_" << n << ",active_"
           << n;
    }
    const bool one = cfg.has_scheme(Scheme::one_relay);
    const bool nm1 = cfg.has_scheme(Scheme::n_minus_one);
    const bool gen = cfg.has_scheme(Scheme::genetic);
    if (one) os << ",one_relay_index";
    if (nm1) os << ",n_minus_one_index";
    if (gen) os << ",genetic_state";
    os << '\n';
    for (const TrialRecord& t : trials) {
        os << t.density_index << ',' << fmt(t.density) << ',' << t.trial << ',' << t.seed << ','
           << t.relay_count << ',' << (t.excluded ? 1 : 0) << ',';
        if (!t.excluded) {
            os << fmt(t.eta_none);
        }
        for (Scheme s : cfg.schemes) {
            const SchemeOutcome* o = t.excluded ? nullptr : t.find(s);
            if (o == nullptr) {
                os << ",,,,,";
                continue;
            }
            os << ',' << fmt(o->eta) << ',' << fmt(o->eta_db) << ',' << fmt(o->gain_db) << ','
               << fmt(o->frequency) << ',' << o->active_relays;
        }
        auto index_of = [&](Scheme s) {
            const SchemeOutcome* o = t.excluded ? nullptr : t.find(s);
            os << ',';
            if (o != nullptr && o->relay_index) {
                os << *o->relay_index;
            }
        };
        if (one) index_of(Scheme::one_relay);
        if (nm1) index_of(Scheme::n_minus_one);
        if (gen) {
            const SchemeOutcome* o = t.excluded ? nullptr : t.find(Scheme::genetic);
            os << ',' << (o != nullptr ? o->state : std::string());
        }
        os << '\n';
    }
}

void write_summary_csv(std::ostream& os, const ExperimentConfig& cfg,
                       const std::vector<TrialRecord>& trials) {
    os << "density,scheme,metric,trials,excluded,mean";
    for (double p : kSummaryPercentiles) {
        os << ",p" << static_cast<int>(p);
    }
    os << ",improved_fraction\n";
    for (const SchemeSummary& g : summarize(cfg, trials)) {
        const std::pair<const char*, const std::vector<double>*> metrics[] = {
            {"eta_db", &g.eta_db}, {"gain_db", &g.gain_db}, {"rate", &g.rate}};
        for (const auto& [name, values] : metrics) {
            os << fmt(g.density) << ',' << to_string(g.scheme) << ',' << name << ',' << g.used << ','
               << g.excluded << ',';
            if (values->empty()) {
                for (std::size_t i = 0; i < std::size(kSummaryPercentiles) + 1; ++i) {
                    os << ',';
                }
                os << '\n';
                continue;
            }
            std::vector<double> sorted = *values;
            std::sort(sorted.begin(), sorted.end());
            os << fmt(mean(sorted));
            for (double p : kSummaryPercentiles) {
                os << ',' << fmt(percentile_sorted(sorted, p));
            }
            os << ',';
            if (std::string(name) == "gain_db") {
                os << fmt(fraction_above(*values, 0.0));
            }
            os << '\n';
        }
    }
}

void write_rates_csv(std::ostream& os, const std::vector<RatePoint>& rates) {
    os << "density,scheme,mean_rate,outage_rate_1pct\n";
    for (const RatePoint& r : rates) {
        os << fmt(r.density) << ',' << to_string(r.scheme) << ',' << fmt(r.mean_rate) << ','
           << fmt(r.outage_rate) << '\n';
    }
}

void write_exclusions_csv(std::ostream& os, const std::vector<TrialRecord>& trials) {
    os << "density_index,trial,seed,reason\n";
    for (const TrialRecord& t : trials) {
        if (!t.excluded) {
            continue;
        }
        std::string reason = t.exclusion_reason;
        std::string quoted = "\"";
        for (char c : reason) {
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        quoted += '"';
        os << t.density_index << ',' << t.trial << ',' << t.seed << ',' << quoted << '\n';
    }
}

void write_response_csv(std::ostream& os, const ResponseComparison& r) {
    os << "frequency,eta_all,eta_all_db,failed_all";
    if (r.alternative) {
        os << ",eta_alt,eta_alt_db,failed_alt";
    }
    os << '\n';
    for (std::size_t i = 0; i < r.all_on.size(); ++i) {
        const ResponsePoint& a = r.all_on[i];
        os << fmt(a.frequency) << ',' << fmt(a.eta) << ',' << fmt(a.failed ? a.eta : to_db(a.eta))
           << ',' << (a.failed ? 1 : 0);
        if (r.alternative) {
            const ResponsePoint& b = (*r.alternative)[i];
            os << ',' << fmt(b.eta) << ',' << fmt(b.failed ? b.eta : to_db(b.eta)) << ','
               << (b.failed ? 1 : 0);
        }
        os << '\n';
    }
}

void write_ecdf_dat(std::ostream& os, const std::vector<SchemeSummary>& groups, bool gain) {
    bool first = true;
    for (const SchemeSummary& g : groups) {
        const std::vector<double>& v = gain ? g.gain_db : g.eta_db;
        if (v.empty()) {
            continue;
        }
        if (!first) {
            os << "\n\n";
        }
        first = false;
        os << "# density=" << fmt(g.density) << " scheme=" << to_string(g.scheme) << '\n';
        for (const EcdfPoint& p : ecdf(v)) {
            os << fmt(p.value) << ' ' << fmt(p.probability) << '\n';
        }
    }
}

void write_cdf_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                       const std::vector<TrialRecord>& trials) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "trials.csv");
        write_trials_csv(out, cfg, trials);
    }
    {
        auto out = open_out(dir / "summary.csv");
        write_summary_csv(out, cfg, trials);
    }
    {
        auto out = open_out(dir / "rates.csv");
        write_rates_csv(out, rate_vs_density(cfg, trials));
    }
    {
        auto out = open_out(dir / "exclusions.csv");
        write_exclusions_csv(out, trials);
    }
    const std::vector<SchemeSummary> groups = summarize(cfg, trials);
    {
        auto out = open_out(dir / "eta_cdf.dat");
        write_ecdf_dat(out, groups, false);
    }
    {
        auto out = open_out(dir / "gain_cdf.dat");
        write_ecdf_dat(out, groups, true);
    }
}

void write_response_outputs(const std::filesystem::path& dir, const ResponseExperiment& r) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "response.csv");
        write_response_csv(out, r.response);
    }
    auto dat = [&](const char* name, const std::vector<ResponsePoint>& pts) {
        auto out = open_out(dir / name);
        for (const ResponsePoint& p : pts) {
            if (!p.failed) {
                out << fmt(p.frequency) << ' ' << fmt(to_db(p.eta)) << '\n';
            }
        }
    };
    dat("response_all.dat", r.response.all_on);
    if (r.response.alternative) {
        dat("response_genetic.dat", *r.response.alternative);
    }
    write_network_file(dir / "network.json", r.network);
}

} // namespace mirelay
