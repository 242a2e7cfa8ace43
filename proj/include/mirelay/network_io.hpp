// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "mirelay/network.hpp"

namespace mirelay {

/// Current version of the network document layout (docs/file-formats.md).
inline constexpr int kNetworkSchemaVersion = 1;

/// Builds a Network from a parsed document. Unknown keys, missing fields and
/// out-of-range values raise ConfigError with the JSON path of the offending
/// field; coil invariants raise GeometryError naming the coil.
Network network_from_json(const nlohmann::json& doc);

nlohmann::json network_to_json(const Network& net);

/// Parse errors carry the line and column reported by the JSON reader.
Network read_network(std::istream& is);
Network read_network_file(const std::filesystem::path& path);

void write_network(std::ostream& os, const Network& net);
void write_network_file(const std::filesystem::path& path, const Network& net);

/// Throws ConfigError naming `where` and the first key not in `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where);

} // namespace mirelay
