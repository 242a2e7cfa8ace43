// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "mirelay/config.hpp"
#include "mirelay/errors.hpp"

using namespace mirelay;
using nlohmann::json;

namespace {

std::string config_error(const json& doc) {
    try {
        config_from_json(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

json minimal() { return json{{"schema_version", 1}}; }

} // namespace

TEST(Config, Defaults) {
    const ExperimentConfig c = config_from_json(minimal());
    EXPECT_EQ(c.kind, ExperimentKind::cdf);
    EXPECT_EQ(c.scenario, Scenario::coaxial);
    EXPECT_EQ(c.misalignment_model, MisalignmentModel::tilted);
    EXPECT_DOUBLE_EQ(c.effective_band().lo, 0.9 * 13.56e6);
    EXPECT_DOUBLE_EQ(c.effective_band().hi, 1.1 * 13.56e6);
    EXPECT_TRUE(c.has_scheme(Scheme::all));
    EXPECT_FALSE(c.has_scheme(Scheme::genetic));
}

TEST(Config, ParsesEveryField) {
    json doc = minimal();
    doc["name"] = "x";
    doc["kind"] = "frequency_response";
    doc["scenario"] = "random-orientations";
    doc["misalignment_model"] = "oriented";
    doc["relay_densities"] = {0.1, 1};
    doc["schemes"] = {"none", "all", "one_relay", "n_minus_one", "freq_tuning", "genetic"};
    doc["band"] = {{"relative", 0.05}};
    doc["f0"] = 10e6;
    doc["seed"] = 99;
    doc["rate"] = {{"noise_figure_db", 10}};
    doc["genetic"] = {{"generations", 12}, {"survivors", 5}};
    doc["coil"] = {{"radius", 0.02}};
    doc["fixed_relay_count"] = 7;
    const ExperimentConfig c = config_from_json(doc);
    EXPECT_EQ(c.kind, ExperimentKind::frequency_response);
    EXPECT_EQ(c.scenario, Scenario::random_orientations);
    EXPECT_EQ(c.misalignment_model, MisalignmentModel::oriented);
    EXPECT_EQ(c.schemes.size(), 6u);
    EXPECT_DOUBLE_EQ(c.effective_band().lo, 9.5e6);
    EXPECT_DOUBLE_EQ(c.effective_band().hi, 10.5e6);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.rate.noise_figure_db, 10.0);
    EXPECT_EQ(c.rate.tx_power, 1e-6);
    EXPECT_EQ(c.genetic.generations, 12u);
    EXPECT_EQ(c.coil.radius, 0.02);
    EXPECT_EQ(c.fixed_relay_count, 7u);
}

TEST(Config, RoundTrip) {
    json doc = minimal();
    doc["scenario"] = "misaligned";
    doc["relay_densities"] = {0.1, 0.3};
    doc["band"] = {{"lo", 12e6}, {"hi", 14e6}};
    const ExperimentConfig a = config_from_json(doc);
    const ExperimentConfig b = config_from_json(config_to_json(a));
    EXPECT_EQ(config_to_json(a), config_to_json(b));
    EXPECT_EQ(b.relay_densities, a.relay_densities);
    EXPECT_EQ(b.effective_band().hi, 14e6);
}

TEST(Config, Diagnostics) {
    json doc = minimal();
    doc["colour"] = 1;
    EXPECT_NE(config_error(doc).find("colour"), std::string::npos);

    doc = minimal();
    doc["schemes"] = {"all", "sometimes"};
    EXPECT_NE(config_error(doc).find("sometimes"), std::string::npos);

    doc = minimal();
    doc["schemes"] = {"all", "all"};
    EXPECT_NE(config_error(doc).find("duplicate"), std::string::npos);

    doc = minimal();
    doc["trials"] = 0;
    EXPECT_NE(config_error(doc).find("trials"), std::string::npos);

    doc = minimal();
    doc["relay_densities"] = {-1};
    EXPECT_NE(config_error(doc).find("relay_densities"), std::string::npos);

    doc = minimal();
    doc["band"] = {{"lo", 2e6}, {"hi", 1e6}};
    EXPECT_NE(config_error(doc).find("band"), std::string::npos);

    doc = minimal();
    doc["band"] = {{"relative", 0.1}, {"lo", 1e6}};
    EXPECT_NE(config_error(doc).find("band"), std::string::npos);

    doc = minimal();
    doc["genetic"] = {{"survivors", 1}};
    EXPECT_NE(config_error(doc).find("genetic"), std::string::npos);

    doc = minimal();
    doc["tx_rx_distance"] = "far";
    EXPECT_NE(config_error(doc).find("tx_rx_distance"), std::string::npos);

    doc = minimal();
    doc["schema_version"] = 2;
    EXPECT_NE(config_error(doc).find("schema_version"), std::string::npos);

    EXPECT_NE(config_error(json::object()).find("schema_version"), std::string::npos);
}

TEST(Config, ParseErrorsReportPosition) {
    std::istringstream in("{\"schema_version\": 1,,}");
    try {
        read_config(in);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}

TEST(Config, ShippedConfigsParse) {
    int n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(MIRELAY_CONFIG_DIR)) {
        if (entry.path().extension() == ".json") {
            EXPECT_NO_THROW(read_config_file(entry.path())) << entry.path();
            ++n;
        }
    }
    EXPECT_GE(n, 7);
}
