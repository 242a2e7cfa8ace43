// SPDX-License-Identifier: Apache-2.0
#include "mirelay/network_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "mirelay/errors.hpp"

namespace mirelay {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

namespace {

double get_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing field '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

Vec3 get_vec3(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing field '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        throw ConfigError(where + "." + key + ": expected an array of 3 numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

CoilParams parse_params(const json& obj, const CoilParams& defaults, const std::string& where) {
    CoilParams p = defaults;
    p.radius = number_or(obj, "radius", defaults.radius, where);
    if (obj.contains("turns")) {
        if (!obj.at("turns").is_number_integer()) {
            throw ConfigError(where + ".turns: expected an integer");
        }
        p.turns = obj.at("turns").get<int>();
    }
    p.self_inductance = number_or(obj, "self_inductance", defaults.self_inductance, where);
    p.resistance = number_or(obj, "resistance", defaults.resistance, where);
    return p;
}

Coil parse_coil(const json& obj, const CoilParams& defaults, const std::string& where,
                std::initializer_list<const char*> extra_keys = {}) {
    std::vector<const char*> allowed{"position", "orientation", "radius", "turns",
                                     "self_inductance", "resistance"};
    allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    Coil c = Coil::make(get_vec3(obj, "position", where), get_vec3(obj, "orientation", where),
                        parse_params(obj, defaults, where));
    c.validate(where);
    return c;
}

LoadState parse_load(const json& obj, double self_inductance,
                     const std::optional<double>& design_frequency, const std::string& where) {
    if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string()) {
        throw ConfigError(where + ": expected an object with a string 'type'");
    }
    const std::string type = obj.at("type").get<std::string>();
    if (type == "open") {
        reject_unknown_keys(obj, {"type"}, where);
        return OpenCircuit{};
    }
    if (type == "resonant") {
        reject_unknown_keys(obj, {"type", "capacitance", "design_frequency"}, where);
        if (obj.contains("capacitance")) {
            return Resonant{get_number(obj, "capacitance", where)};
        }
        const double f0 = obj.contains("design_frequency")
                              ? get_number(obj, "design_frequency", where)
                              : design_frequency.value_or(0.0);
        if (!(f0 > 0.0)) {
            throw ConfigError(where + ": resonant load needs 'capacitance' or a design frequency");
        }
        return resonant_for(self_inductance, f0);
    }
    if (type == "custom") {
        reject_unknown_keys(obj, {"type", "resistance", "reactance"}, where);
        return CustomLoad{cplx(get_number(obj, "resistance", where),
                               number_or(obj, "reactance", 0.0, where))};
    }
    throw ConfigError(where + ".type: unknown load type '" + type + "'");
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json coil_json(const Coil& c) {
    return json{{"position", vec_json(c.position)},
                {"orientation", vec_json(c.orientation)},
                {"radius", c.radius},
                {"turns", c.turns},
                {"self_inductance", c.self_inductance},
                {"resistance", c.resistance}};
}

json load_json(const LoadState& load) {
    if (const auto* r = std::get_if<Resonant>(&load)) {
        return json{{"type", "resonant"}, {"capacitance", r->capacitance}};
    }
    if (const auto* c = std::get_if<CustomLoad>(&load)) {
        return json{{"type", "custom"},
                    {"resistance", c->impedance.real()},
                    {"reactance", c->impedance.imag()}};
    }
    return json{{"type", "open"}};
}

} // namespace

Network network_from_json(const json& doc) {
    reject_unknown_keys(doc,
                        {"schema_version", "design_frequency", "mtr_override", "quadrature_points",
                         "coil_defaults", "tx", "rx", "relays"},
                        "network");
    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer()) {
        throw ConfigError("network: missing integer field 'schema_version'");
    }
    if (doc.at("schema_version").get<int>() != kNetworkSchemaVersion) {
        throw ConfigError("network.schema_version: unsupported version " +
                          doc.at("schema_version").dump());
    }
    CoilParams defaults;
    if (doc.contains("coil_defaults")) {
        const json& cd = doc.at("coil_defaults");
        reject_unknown_keys(cd, {"radius", "turns", "self_inductance", "resistance"},
                            "network.coil_defaults");
        defaults = parse_params(cd, defaults, "network.coil_defaults");
    }
    std::optional<double> f0;
    if (doc.contains("design_frequency")) {
        f0 = get_number(doc, "design_frequency", "network");
    }
    std::optional<double> mtr;
    if (doc.contains("mtr_override")) {
        mtr = get_number(doc, "mtr_override", "network");
    }
    QuadratureOptions quad;
    if (doc.contains("quadrature_points")) {
        const json& q = doc.at("quadrature_points");
        if (!q.is_number_integer() || q.get<std::int64_t>() <= 0) {
            throw ConfigError("network.quadrature_points: expected a positive integer");
        }
        quad.initial_points = doc.at("quadrature_points").get<std::size_t>();
    }
    if (!doc.contains("tx") || !doc.contains("rx")) {
        throw ConfigError("network: 'tx' and 'rx' are required");
    }
    Coil tx = parse_coil(doc.at("tx"), defaults, "tx");
    Coil rx = parse_coil(doc.at("rx"), defaults, "rx");

    std::vector<Relay> relays;
    if (doc.contains("relays")) {
        const json& arr = doc.at("relays");
        if (!arr.is_array()) {
            throw ConfigError("network.relays: expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "relay " + std::to_string(i);
            Coil c = parse_coil(arr[i], defaults, where, {"load"});
            LoadState load = arr[i].contains("load")
                                 ? parse_load(arr[i].at("load"), c.self_inductance, f0, where + ".load")
                                 : LoadState{};
            if (!arr[i].contains("load")) {
                if (!f0) {
                    throw ConfigError(where + ": missing 'load' and no design_frequency to default to");
                }
                load = resonant_for(c.self_inductance, *f0);
            }
            relays.push_back(Relay{std::move(c), std::move(load)});
        }
    }
    try {
        return Network::build(std::move(tx), std::move(rx), std::move(relays), mtr, f0, quad);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("network: ") + e.what());
    }
}

json network_to_json(const Network& net) {
    json doc;
    doc["schema_version"] = kNetworkSchemaVersion;
    if (net.design_frequency()) {
        doc["design_frequency"] = *net.design_frequency();
    }
    if (net.mtr_override()) {
        doc["mtr_override"] = *net.mtr_override();
    }
    doc["tx"] = coil_json(net.tx());
    doc["rx"] = coil_json(net.rx());
    json relays = json::array();
    for (const Relay& r : net.relays()) {
        json c = coil_json(r.coil);
        c["load"] = load_json(r.load);
        relays.push_back(std::move(c));
    }
    doc["relays"] = std::move(relays);
    return doc;
}

Network read_network(std::istream& is) {
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("network file: ") + e.what());
    }
    return network_from_json(doc);
}

Network read_network_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open network file " + path.string());
    }
    try {
        return read_network(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void write_network(std::ostream& os, const Network& net) {
    // dump() emits shortest round-trip representations of doubles.
    os << network_to_json(net).dump(2) << '\n';
}

void write_network_file(const std::filesystem::path& path, const Network& net) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write network file " + path.string());
    }
    write_network(out, net);
}

} // namespace mirelay
