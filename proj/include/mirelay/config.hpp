// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mirelay/geometry.hpp"
#include "mirelay/optimize.hpp"

namespace mirelay {

inline constexpr int kConfigSchemaVersion = 1;

enum class Scenario { coaxial, misaligned, random_orientations };
enum class Scheme { none, all, one_relay, n_minus_one, freq_tuning, genetic };
enum class ExperimentKind { cdf, frequency_response };

/// How the misaligned scenario realizes the attenuated Tx-Rx pair.
/// override: coaxial coils, only M_tr is scaled.
/// tilted: Tx faces Rx, Rx is tilted until the geometric M_tr matches.
/// oriented: Tx/Rx orientations drawn per trial, conditioned on the M_tr
/// loss lying within misalignment_window_db of misalignment_db; M_tr is then
/// pinned to the exact target value.
enum class MisalignmentModel { override_only, tilted, oriented };

std::string to_string(Scenario s);
std::string to_string(Scheme s);
std::string to_string(ExperimentKind k);
std::string to_string(MisalignmentModel m);
Scenario parse_scenario(const std::string& s);
Scheme parse_scheme(const std::string& s);
ExperimentKind parse_kind(const std::string& s);
MisalignmentModel parse_misalignment_model(const std::string& s);

struct RateParams {
    double tx_power = 1e-6;        ///< [W]
    double bandwidth = 1e3;        ///< [Hz]
    double temperature = 300.0;    ///< [K]
    double noise_figure_db = 15.0;
};

struct ExperimentConfig {
    int schema_version = kConfigSchemaVersion;
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::cdf;
    Scenario scenario = Scenario::coaxial;
    double misalignment_db = 23.7; ///< used by the misaligned scenario
    MisalignmentModel misalignment_model = MisalignmentModel::tilted;
    double misalignment_window_db = 0.25;
    double tx_rx_distance = 0.5;   ///< [m]
    std::vector<double> relay_densities{0.0}; ///< relays per dm^3
    std::size_t trials = 100;
    std::vector<Scheme> schemes{Scheme::none, Scheme::all};
    double f0 = 13.56e6;
    std::uint64_t seed = 1;
    RateParams rate{};
    /// Search band for freq_tuning and sweep range for frequency responses.
    /// Defaults to f0 +- 10 %.
    std::optional<FrequencyBand> band;
    std::size_t grid_points = 401;
    GaParams genetic{};
    CoilParams coil{};
    double min_coil_separation = 0.024;
    QuadratureOptions quadrature{};
    std::optional<std::size_t> fixed_relay_count;
    std::size_t workers = 0;       ///< 0: available parallelism
    bool long_running = false;
    std::size_t response_trial = 0; ///< trial drawn for frequency_response

    FrequencyBand effective_band() const;
    bool has_scheme(Scheme s) const;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

/// Unknown keys and type mismatches raise ConfigError naming the field.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig read_config(std::istream& is);
ExperimentConfig read_config_file(const std::filesystem::path& path);

} // namespace mirelay
