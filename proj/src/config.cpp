// SPDX-License-Identifier: Apache-2.0
#include "mirelay/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "mirelay/errors.hpp"
#include "mirelay/network_io.hpp"

namespace mirelay {

using nlohmann::json;

namespace {

template <typename E>
struct Names {
    E value;
    const char* name;
};

constexpr Names<Scenario> kScenarios[] = {{Scenario::coaxial, "coaxial"},
                                          {Scenario::misaligned, "misaligned"},
                                          {Scenario::random_orientations, "random-orientations"}};
constexpr Names<Scheme> kSchemes[] = {{Scheme::none, "none"},
                                      {Scheme::all, "all"},
                                      {Scheme::one_relay, "one_relay"},
                                      {Scheme::n_minus_one, "n_minus_one"},
                                      {Scheme::freq_tuning, "freq_tuning"},
                                      {Scheme::genetic, "genetic"}};
constexpr Names<ExperimentKind> kKinds[] = {{ExperimentKind::cdf, "cdf"},
                                            {ExperimentKind::frequency_response,
                                             "frequency_response"}};

constexpr Names<MisalignmentModel> kModels[] = {{MisalignmentModel::override_only, "override"},
                                               {MisalignmentModel::tilted, "tilted"},
                                               {MisalignmentModel::oriented, "oriented"}};

template <typename E, std::size_t N>
std::string name_of(const Names<E> (&table)[N], E v) {
    for (const auto& e : table) {
        if (e.value == v) {
            return e.name;
        }
    }
    return "?";
}

template <typename E, std::size_t N>
E value_of(const Names<E> (&table)[N], const std::string& s, const char* what) {
    for (const auto& e : table) {
        if (s == e.name) {
            return e.value;
        }
    }
    std::string msg = std::string("unknown ") + what + " '" + s + "' (expected one of:";
    for (const auto& e : table) {
        msg += std::string(" ") + e.name;
    }
    throw ConfigError(msg + ")");
}

std::string path(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

double num(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(path(where, key) + ": expected a number");
    }
    return v.get<double>();
}

std::size_t count(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(path(where, key) + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::string str(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(path(where, key) + ": expected a string");
    }
    return v.get<std::string>();
}

bool boolean(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(path(where, key) + ": expected true or false");
    }
    return v.get<bool>();
}

template <typename F>
void wrap(const std::string& field, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        if (msg.rfind(field, 0) == 0) {
            throw;
        }
        throw ConfigError(field + ": " + msg);
    }
}

} // namespace

std::string to_string(Scenario s) { return name_of(kScenarios, s); }
std::string to_string(Scheme s) { return name_of(kSchemes, s); }
std::string to_string(ExperimentKind k) { return name_of(kKinds, k); }
Scenario parse_scenario(const std::string& s) { return value_of(kScenarios, s, "scenario"); }
Scheme parse_scheme(const std::string& s) { return value_of(kSchemes, s, "scheme"); }
ExperimentKind parse_kind(const std::string& s) { return value_of(kKinds, s, "kind"); }
std::string to_string(MisalignmentModel m) { return name_of(kModels, m); }
MisalignmentModel parse_misalignment_model(const std::string& s) {
    return value_of(kModels, s, "misalignment model");
}

FrequencyBand ExperimentConfig::effective_band() const {
    return band ? *band : FrequencyBand::around(f0, 0.1);
}

bool ExperimentConfig::has_scheme(Scheme s) const {
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (schema_version != kConfigSchemaVersion) {
        fail("schema_version: unsupported version " + std::to_string(schema_version));
    }
    if (trials < 1) {
        fail("trials: must be at least 1");
    }
    if (relay_densities.empty()) {
        fail("relay_densities: must not be empty");
    }
    for (double d : relay_densities) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            fail("relay_densities: entries must be finite and >= 0");
        }
    }
    if (schemes.empty()) {
        fail("schemes: must not be empty");
    }
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        for (std::size_t j = i + 1; j < schemes.size(); ++j) {
            if (schemes[i] == schemes[j]) {
                fail("schemes: duplicate entry '" + to_string(schemes[i]) + "'");
            }
        }
    }
    if (!(tx_rx_distance > 0.0) || !std::isfinite(tx_rx_distance)) {
        fail("tx_rx_distance: must be positive");
    }
    if (!(f0 > 0.0) || !std::isfinite(f0)) {
        fail("f0: must be positive");
    }
    if (!std::isfinite(misalignment_db)) {
        fail("misalignment_db: must be finite");
    }
    if (!(misalignment_window_db > 0.0) || !std::isfinite(misalignment_window_db)) {
        fail("misalignment_window_db: must be positive");
    }
    if (!(rate.tx_power > 0.0) || !(rate.bandwidth > 0.0) || !(rate.temperature > 0.0) ||
        !std::isfinite(rate.noise_figure_db)) {
        fail("rate: tx_power, bandwidth and temperature must be positive");
    }
    const FrequencyBand b = effective_band();
    if (!(b.lo > 0.0) || !(b.hi > b.lo)) {
        fail("band: need 0 < lo < hi");
    }
    if (grid_points < 2) {
        fail("grid_points: must be at least 2");
    }
    if (!(min_coil_separation >= 0.0)) {
        fail("min_coil_separation: must be >= 0");
    }
    if (!(coil.radius > 0.0) || coil.turns < 1 || !(coil.self_inductance > 0.0) ||
        !(coil.resistance > 0.0)) {
        fail("coil: radius, turns, self_inductance and resistance must be positive");
    }
    if (quadrature.initial_points < 4 || quadrature.max_points < quadrature.initial_points ||
        !(quadrature.rel_tol > 0.0)) {
        fail("quadrature: need 4 <= initial_points <= max_points and rel_tol > 0");
    }
    try {
        genetic.validate();
    } catch (const std::exception& e) {
        fail(std::string("genetic: ") + e.what());
    }
    if (kind == ExperimentKind::frequency_response && response_trial >= trials) {
        fail("response_trial: must be below trials");
    }
}

ExperimentConfig config_from_json(const json& doc) {
    reject_unknown_keys(doc,
                        {"schema_version", "name", "kind", "scenario", "misalignment_db",
                         "misalignment_model", "misalignment_window_db",
                         "tx_rx_distance", "relay_densities", "trials", "schemes", "f0", "seed",
                         "rate", "band", "grid_points", "genetic", "coil", "min_coil_separation",
                         "quadrature", "fixed_relay_count", "workers", "long_running",
                         "response_trial"},
                        "config");
    ExperimentConfig c;
    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer()) {
        throw ConfigError("schema_version: missing or not an integer");
    }
    c.schema_version = doc.at("schema_version").get<int>();
    if (c.schema_version != kConfigSchemaVersion) {
        throw ConfigError("schema_version: unsupported version " + std::to_string(c.schema_version));
    }
    const std::string w;
    if (doc.contains("name")) c.name = str(doc, "name", w);
    if (doc.contains("kind")) wrap("kind", [&] { c.kind = parse_kind(str(doc, "kind", w)); });
    if (doc.contains("scenario")) {
        wrap("scenario", [&] { c.scenario = parse_scenario(str(doc, "scenario", w)); });
    }
    if (doc.contains("misalignment_db")) c.misalignment_db = num(doc, "misalignment_db", w);
    if (doc.contains("misalignment_model")) {
        wrap("misalignment_model", [&] {
            c.misalignment_model = parse_misalignment_model(str(doc, "misalignment_model", w));
        });
    }
    if (doc.contains("misalignment_window_db")) {
        c.misalignment_window_db = num(doc, "misalignment_window_db", w);
    }
    if (doc.contains("tx_rx_distance")) c.tx_rx_distance = num(doc, "tx_rx_distance", w);
    if (doc.contains("relay_densities")) {
        const json& arr = doc.at("relay_densities");
        if (!arr.is_array()) {
            throw ConfigError("relay_densities: expected an array of numbers");
        }
        c.relay_densities.clear();
        for (const json& v : arr) {
            if (!v.is_number()) {
                throw ConfigError("relay_densities: expected an array of numbers");
            }
            c.relay_densities.push_back(v.get<double>());
        }
    }
    if (doc.contains("trials")) c.trials = count(doc, "trials", w);
    if (doc.contains("schemes")) {
        const json& arr = doc.at("schemes");
        if (!arr.is_array()) {
            throw ConfigError("schemes: expected an array of strings");
        }
        c.schemes.clear();
        for (const json& v : arr) {
            if (!v.is_string()) {
                throw ConfigError("schemes: expected an array of strings");
            }
            wrap("schemes", [&] { c.schemes.push_back(parse_scheme(v.get<std::string>())); });
        }
    }
    if (doc.contains("f0")) c.f0 = num(doc, "f0", w);
    if (doc.contains("seed")) {
        const json& v = doc.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ConfigError("seed: expected a non-negative integer");
        }
        c.seed = v.get<std::uint64_t>();
    }
    if (doc.contains("rate")) {
        const json& r = doc.at("rate");
        reject_unknown_keys(r, {"tx_power", "bandwidth", "temperature", "noise_figure_db"}, "rate");
        if (r.contains("tx_power")) c.rate.tx_power = num(r, "tx_power", "rate");
        if (r.contains("bandwidth")) c.rate.bandwidth = num(r, "bandwidth", "rate");
        if (r.contains("temperature")) c.rate.temperature = num(r, "temperature", "rate");
        if (r.contains("noise_figure_db")) c.rate.noise_figure_db = num(r, "noise_figure_db", "rate");
    }
    if (doc.contains("band")) {
        const json& b = doc.at("band");
        reject_unknown_keys(b, {"lo", "hi", "relative"}, "band");
        if (b.contains("relative")) {
            if (b.contains("lo") || b.contains("hi")) {
                throw ConfigError("band: give either 'relative' or 'lo'/'hi'");
            }
            const double rel = num(b, "relative", "band");
            if (!(rel > 0.0 && rel < 1.0)) {
                throw ConfigError("band.relative: must lie in (0, 1)");
            }
            c.band = FrequencyBand::around(c.f0, rel);
        } else {
            if (!b.contains("lo") || !b.contains("hi")) {
                throw ConfigError("band: needs 'lo' and 'hi'");
            }
            c.band = FrequencyBand{num(b, "lo", "band"), num(b, "hi", "band")};
        }
    }
    if (doc.contains("grid_points")) c.grid_points = count(doc, "grid_points", w);
    if (doc.contains("genetic")) {
        const json& g = doc.at("genetic");
        reject_unknown_keys(g,
                            {"generations", "survivors", "recombined_per_generation",
                             "expected_flips", "max_flip_probability"},
                            "genetic");
        if (g.contains("generations")) c.genetic.generations = count(g, "generations", "genetic");
        if (g.contains("survivors")) c.genetic.survivors = count(g, "survivors", "genetic");
        if (g.contains("recombined_per_generation")) {
            c.genetic.recombined_per_generation = count(g, "recombined_per_generation", "genetic");
        }
        if (g.contains("expected_flips")) c.genetic.expected_flips = num(g, "expected_flips", "genetic");
        if (g.contains("max_flip_probability")) {
            c.genetic.max_flip_probability = num(g, "max_flip_probability", "genetic");
        }
    }
    if (doc.contains("coil")) {
        const json& k = doc.at("coil");
        reject_unknown_keys(k, {"radius", "turns", "self_inductance", "resistance"}, "coil");
        if (k.contains("radius")) c.coil.radius = num(k, "radius", "coil");
        if (k.contains("turns")) {
            if (!k.at("turns").is_number_integer()) {
                throw ConfigError("coil.turns: expected an integer");
            }
            c.coil.turns = k.at("turns").get<int>();
        }
        if (k.contains("self_inductance")) c.coil.self_inductance = num(k, "self_inductance", "coil");
        if (k.contains("resistance")) c.coil.resistance = num(k, "resistance", "coil");
    }
    if (doc.contains("min_coil_separation")) {
        c.min_coil_separation = num(doc, "min_coil_separation", w);
    }
    if (doc.contains("quadrature")) {
        const json& q = doc.at("quadrature");
        reject_unknown_keys(q, {"initial_points", "max_points", "rel_tol"}, "quadrature");
        if (q.contains("initial_points")) {
            c.quadrature.initial_points = count(q, "initial_points", "quadrature");
        }
        if (q.contains("max_points")) c.quadrature.max_points = count(q, "max_points", "quadrature");
        if (q.contains("rel_tol")) c.quadrature.rel_tol = num(q, "rel_tol", "quadrature");
    }
    if (doc.contains("fixed_relay_count") && !doc.at("fixed_relay_count").is_null()) {
        c.fixed_relay_count = count(doc, "fixed_relay_count", w);
    }
    if (doc.contains("workers")) c.workers = count(doc, "workers", w);
    if (doc.contains("long_running")) c.long_running = boolean(doc, "long_running", w);
    if (doc.contains("response_trial")) c.response_trial = count(doc, "response_trial", w);
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["schema_version"] = c.schema_version;
    doc["name"] = c.name;
    doc["kind"] = to_string(c.kind);
    doc["scenario"] = to_string(c.scenario);
    doc["misalignment_db"] = c.misalignment_db;
    doc["misalignment_model"] = to_string(c.misalignment_model);
    doc["misalignment_window_db"] = c.misalignment_window_db;
    doc["tx_rx_distance"] = c.tx_rx_distance;
    doc["relay_densities"] = c.relay_densities;
    doc["trials"] = c.trials;
    json schemes = json::array();
    for (Scheme s : c.schemes) {
        schemes.push_back(to_string(s));
    }
    doc["schemes"] = schemes;
    doc["f0"] = c.f0;
    doc["seed"] = c.seed;
    doc["rate"] = {{"tx_power", c.rate.tx_power},
                   {"bandwidth", c.rate.bandwidth},
                   {"temperature", c.rate.temperature},
                   {"noise_figure_db", c.rate.noise_figure_db}};
    const FrequencyBand b = c.effective_band();
    doc["band"] = {{"lo", b.lo}, {"hi", b.hi}};
    doc["grid_points"] = c.grid_points;
    doc["genetic"] = {{"generations", c.genetic.generations},
                      {"survivors", c.genetic.survivors},
                      {"recombined_per_generation", c.genetic.recombined_per_generation},
                      {"expected_flips", c.genetic.expected_flips},
                      {"max_flip_probability", c.genetic.max_flip_probability}};
    doc["coil"] = {{"radius", c.coil.radius},
                   {"turns", c.coil.turns},
                   {"self_inductance", c.coil.self_inductance},
                   {"resistance", c.coil.resistance}};
    doc["min_coil_separation"] = c.min_coil_separation;
    doc["quadrature"] = {{"initial_points", c.quadrature.initial_points},
                         {"max_points", c.quadrature.max_points},
                         {"rel_tol", c.quadrature.rel_tol}};
    doc["fixed_relay_count"] = c.fixed_relay_count ? json(*c.fixed_relay_count) : json(nullptr);
    doc["workers"] = c.workers;
    doc["long_running"] = c.long_running;
    doc["response_trial"] = c.response_trial;
    return doc;
}

ExperimentConfig read_config(std::istream& is) {
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return config_from_json(doc);
}

ExperimentConfig read_config_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) {
        throw ConfigError("cannot open config file " + p.string());
    }
    try {
        return read_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

} // namespace mirelay
