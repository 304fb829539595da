#pragma once

// Tabular experiment reports with an embedded run configuration, written as
// CSV (config and summary as leading '#' lines) or as a JSON document.

#include "cubic/arith.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cubic {

using Json = nlohmann::ordered_json;

struct ExperimentReport {
  std::string experiment;
  std::optional<std::string> field;
  std::optional<std::uint64_t> N;
  std::optional<RhoEstimate> rho;
  /// The full run configuration; config_hash is the SHA-1 of its compact dump.
  Json config = Json::object();
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  /// Human-readable lines for the terminal.
  std::vector<std::string> headline;

  void add_row(std::vector<Json> row);
};

/// Lowercase hex SHA-1 digest.
std::string sha1_hex(std::string_view data);

Json rho_to_json(const RhoEstimate& rho);
Json to_json(const ExperimentReport& report);
void write_csv(const ExperimentReport& report, std::ostream& out);

}  // namespace cubic
