// SPDX-License-Identifier: Apache-2.0
// mirelay command-line front end.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mirelay/circuit.hpp"
#include "mirelay/config.hpp"
#include "mirelay/errors.hpp"
#include "mirelay/experiments.hpp"
#include "mirelay/matching.hpp"
#include "mirelay/network_io.hpp"
#include "mirelay/optimize.hpp"
#include "mirelay/version.hpp"

namespace {

using namespace mirelay;

enum Exit : int {
    kOk = 0,
    kOther = 1,
    kConfig = 2,
    kGeometry = 3,
    kNumerical = 4,
    kExclusions = 5,
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cnum(cplx z) {
    return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "j";
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double pick_frequency(const Network& net, const std::optional<double>& freq) {
    if (freq) {
        return *freq;
    }
    return net.design_frequency().value_or(13.56e6);
}

SwitchState pick_state(const Network& net, const std::string& bits) {
    if (bits.empty()) {
        return SwitchState::all_on(net.relay_count());
    }
    SwitchState s = SwitchState::from_string(bits);
    if (s.size() != net.relay_count()) {
        throw ConfigError("--state has " + std::to_string(s.size()) + " bits but the network has " +
                          std::to_string(net.relay_count()) + " relays");
    }
    return s;
}

FrequencyBand parse_band(const std::string& text, double f0) {
    if (text.empty()) {
        return FrequencyBand::around(f0);
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("--band expects LO:HI in Hz");
    }
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("--band expects LO:HI in Hz");
    }
}

void print_report(const GainReport& r) {
    std::cout << "frequency_hz: " << num(r.frequency) << '\n'
              << "rho: " << num(r.rho) << '\n'
              << "chi: " << num(r.chi) << '\n'
              << "eta: " << num(r.eta) << '\n'
              << "eta_db: " << num(to_db(r.eta)) << '\n'
              << "h: " << cnum(r.h) << '\n'
              << "z_in: " << cnum(r.z_in) << '\n'
              << "z_out: " << cnum(r.z_out) << '\n'
              << "source_impedance: " << cnum(std::conj(r.z_in)) << '\n'
              << "load_impedance: " << cnum(std::conj(r.z_out)) << '\n';
    if (r.lossless_limit) {
        std::cout << "note: lossless limit, matched resistances vanish\n";
    }
}

struct GainArgs {
    std::string network;
    std::optional<double> freq;
    std::string state;
};

int cmd_gain(const GainArgs& a) {
    const Network net = read_network_file(a.network);
    const double f = pick_frequency(net, a.freq);
    print_report(gain_report(effective_two_port(net, f, pick_state(net, a.state))));
    return kOk;
}

struct OptimizeArgs {
    std::string network;
    std::string scheme = "genetic";
    std::uint64_t seed = 1;
    std::optional<double> freq;
    std::string band;
    std::size_t grid = 401;
    std::string trace;
    std::size_t generations = GaParams{}.generations;
};

int cmd_optimize(const OptimizeArgs& a) {
    const Network net = read_network_file(a.network);
    const double f = pick_frequency(net, a.freq);
    const std::size_t n = net.relay_count();
    if (a.scheme == "genetic") {
        GaParams p;
        p.rng_seed = a.seed;
        p.generations = a.generations;
        const GeneticResult r = optimize_genetic(net, f, p);
        std::cout << "scheme: genetic\n"
                  << "frequency_hz: " << num(f) << '\n'
                  << "eta: " << num(r.eta) << '\n'
                  << "eta_db: " << num(to_db(r.eta)) << '\n'
                  << "eta_all_db: " << num(to_db(r.eta_all)) << '\n'
                  << "eta_none_db: " << num(to_db(r.eta_none)) << '\n'
                  << "active_relays: " << r.state.count() << '\n'
                  << "state: " << r.state.to_string() << '\n'
                  << "evaluations: " << r.evaluations << '\n';
        if (!a.trace.empty()) {
            std::ofstream out(a.trace);
            if (!out) {
                throw ConfigError("cannot write trace file " + a.trace);
            }
            write_trace_csv(out, r.trace);
        }
        return kOk;
    }
    if (a.scheme == "one" || a.scheme == "n-1") {
        const bool one = a.scheme == "one";
        const IndexResult r = one ? optimize_one_relay(net, f) : optimize_n_minus_one(net, f);
        const SwitchState s = one ? SwitchState::single(n, r.index) : SwitchState::all_but(n, r.index);
        std::cout << "scheme: " << a.scheme << '\n'
                  << "frequency_hz: " << num(f) << '\n'
                  << (one ? "active_relay: " : "open_relay: ") << r.index << '\n'
                  << "eta: " << num(r.eta) << '\n'
                  << "eta_db: " << num(to_db(r.eta)) << '\n'
                  << "state: " << s.to_string() << '\n';
        return kOk;
    }
    if (a.scheme == "freq") {
        const FrequencyResult r = optimize_frequency(net, parse_band(a.band, f), a.grid);
        std::cout << "scheme: freq\n"
                  << "f_star_hz: " << num(r.frequency) << '\n'
                  << "eta: " << num(r.eta) << '\n'
                  << "eta_db: " << num(to_db(r.eta)) << '\n'
                  << "evaluations: " << r.evaluations << '\n'
                  << "failed_points: " << r.failed_points << '\n';
        return kOk;
    }
    throw ConfigError("--scheme must be one of genetic, one, n-1, freq");
}

struct SweepArgs {
    std::string network;
    std::string band;
    std::size_t grid = 401;
    std::string state;
};

int cmd_sweep(const SweepArgs& a) {
    const Network net = read_network_file(a.network);
    const double f0 = pick_frequency(net, std::nullopt);
    ResponseComparison r;
    r.all_on = frequency_response(net, parse_band(a.band, f0), a.grid, pick_state(net, a.state));
    write_response_csv(std::cout, r);
    return kOk;
}

struct SampleArgs {
    std::string out;
    std::string scenario = "coaxial";
    double distance = 0.5;
    double density = 0.1;
    std::optional<std::size_t> count;
    std::uint64_t seed = 1;
    double f0 = 13.56e6;
};

int cmd_sample(const SampleArgs& a) {
    ExperimentConfig cfg;
    cfg.scenario = parse_scenario(a.scenario);
    cfg.tx_rx_distance = a.distance;
    cfg.fixed_relay_count = a.count;
    cfg.f0 = a.f0;
    cfg.relay_densities = {a.density};
    cfg.validate();
    const Network net = sample_trial_network(cfg, a.density, a.seed);
    if (a.out.empty() || a.out == "-") {
        write_network(std::cout, net);
    } else {
        write_network_file(a.out, net);
    }
    return kOk;
}

struct ExperimentArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    bool quiet = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    ExperimentConfig cfg = read_config_file(a.config);
    if (a.seed) {
        cfg.seed = *a.seed;
    }
    if (a.workers) {
        cfg.workers = *a.workers;
    }
    cfg.validate();
    const std::filesystem::path dir = a.out;
    std::filesystem::create_directories(dir);
    const std::size_t workers = resolve_workers(cfg.workers);

    nlohmann::json manifest;
    manifest["config_path"] = std::filesystem::absolute(a.config).string();
    manifest["output_directory"] = std::filesystem::absolute(dir).string();
    manifest["version"] = version();
    manifest["master_seed"] = cfg.seed;
    manifest["workers"] = workers;
    manifest["started_utc"] = utc_now();
    manifest["config"] = config_to_json(cfg);
    if (cfg.long_running) {
        std::cerr << "warning: " << cfg.name << " is flagged long-running\n";
    }

    int code = kOk;
    if (cfg.kind == ExperimentKind::frequency_response) {
        const ResponseExperiment r = run_response_experiment(cfg);
        write_response_outputs(dir, r);
        manifest["relays"] = r.network.relay_count();
        manifest["eta_all_db"] = to_db(r.eta_all);
        manifest["eta_genetic_db"] = to_db(r.eta_genetic);
        std::cout << "relays: " << r.network.relay_count() << '\n'
                  << "eta_all_db: " << num(to_db(r.eta_all)) << '\n'
                  << "eta_genetic_db: " << num(to_db(r.eta_genetic)) << '\n';
    } else {
        ProgressFn progress;
        if (!a.quiet) {
            progress = [](std::size_t done, std::size_t total) {
                if (done == total || done % 50 == 0) {
                    std::cerr << "\r" << done << '/' << total << " trials" << std::flush;
                    if (done == total) {
                        std::cerr << '\n';
                    }
                }
            };
        }
        const std::vector<TrialRecord> trials = run_cdf_experiment(cfg, progress);
        write_cdf_outputs(dir, cfg, trials);
        const std::size_t excluded = excluded_count(trials);
        manifest["trials"] = trials.size();
        manifest["excluded"] = excluded;
        std::cout << "trials: " << trials.size() << '\n' << "excluded: " << excluded << '\n';
        if (static_cast<double>(excluded) >= 1e-3 * static_cast<double>(trials.size())) {
            std::cerr << "error: " << excluded << " of " << trials.size()
                      << " trials excluded (see exclusions.csv)\n";
            code = kExclusions;
        }
    }
    manifest["finished_utc"] = utc_now();
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
    std::cout << "output: " << dir.string() << '\n';
    return code;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return kGeometry;
    } catch (const ConditioningError& e) {
        std::cerr << "numerical error at " << num(e.frequency()) << " Hz: " << e.what() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kConfig;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magneto-inductive passive relaying simulator"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    GainArgs gain;
    auto* g = app.add_subcommand("gain", "Channel power gain of a network file");
    g->add_option("network", gain.network, "Network JSON file")->required();
    g->add_option("--freq", gain.freq, "Operating frequency [Hz] (default: design frequency)");
    g->add_option("--state", gain.state, "Switch state bits, 1 = closed (default: all closed)");

    OptimizeArgs opt;
    auto* o = app.add_subcommand("optimize", "Run a load-switching or frequency-tuning scheme");
    o->add_option("network", opt.network, "Network JSON file")->required();
    o->add_option("--scheme", opt.scheme, "genetic | one | n-1 | freq")
        ->check(CLI::IsMember({"genetic", "one", "n-1", "freq"}));
    o->add_option("--seed", opt.seed, "Genetic RNG seed");
    o->add_option("--freq", opt.freq, "Operating frequency [Hz]");
    o->add_option("--band", opt.band, "Search band LO:HI [Hz] (default: f0 +- 10%)");
    o->add_option("--grid", opt.grid, "Frequency grid points")->check(CLI::Range(2, 1000000));
    o->add_option("--trace", opt.trace, "Write the genetic trace CSV here");
    o->add_option("--generations", opt.generations, "Genetic generations")->check(CLI::PositiveNumber);

    ExperimentArgs exp;
    auto* e = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a config file");
    e->add_option("--config", exp.config, "Experiment config JSON")->required();
    e->add_option("--out", exp.out, "Output directory")->required();
    e->add_option("--seed", exp.seed, "Override the master seed");
    e->add_option("--workers", exp.workers, "Worker threads (0: available parallelism)");
    e->add_flag("--quiet", exp.quiet, "No progress output");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Frequency response of a network file as CSV");
    s->add_option("network", sw.network, "Network JSON file")->required();
    s->add_option("--band", sw.band, "Band LO:HI [Hz] (default: f0 +- 10%)");
    s->add_option("--grid", sw.grid, "Grid points")->check(CLI::Range(2, 1000000));
    s->add_option("--state", sw.state, "Switch state bits (default: all closed)");

    SampleArgs smp;
    auto* sp = app.add_subcommand("sample", "Draw a random network and write it as JSON");
    sp->add_option("--out", smp.out, "Output file (default: stdout)");
    sp->add_option("--scenario", smp.scenario, "coaxial | misaligned | random-orientations");
    sp->add_option("--distance", smp.distance, "Tx-Rx distance [m]");
    sp->add_option("--density", smp.density, "Relays per dm^3");
    sp->add_option("--count", smp.count, "Fixed relay count instead of a Poisson draw");
    sp->add_option("--seed", smp.seed, "RNG seed");
    sp->add_option("--freq", smp.f0, "Design frequency [Hz]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kOk : kConfig;
    }

    if (*g) return guarded([&] { return cmd_gain(gain); });
    if (*o) return guarded([&] { return cmd_optimize(opt); });
    if (*e) return guarded([&] { return cmd_experiment(exp); });
    if (*s) return guarded([&] { return cmd_sweep(sw); });
    if (*sp) return guarded([&] { return cmd_sample(smp); });
    return kOther;
}
