#include "cubic/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cubic {

void ExperimentReport::add_row(std::vector<Json> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width does not match the columns");
  rows.push_back(std::move(row));
}

std::string sha1_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

Json rho_to_json(const RhoEstimate& rho) {
  return Json{{"value", rho.value}, {"std_error", rho.std_error}, {"method", to_string(rho.method)}, {"B", rho.B}};
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["field"] = r.field ? Json(*r.field) : Json(nullptr);
  j["N"] = r.N ? Json(*r.N) : Json(nullptr);
  j["rho"] = r.rho ? rho_to_json(*r.rho) : Json(nullptr);
  j["config_hash"] = r.config_hash;
  j["config"] = r.config;
  j["summary"] = r.summary;
  j["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(row);
  j["rows"] = rows;
  return j;
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

void write_csv(const ExperimentReport& r, std::ostream& out) {
  out << "# experiment: " << r.experiment << '\n';
  out << "# config_hash: " << r.config_hash << '\n';
  out << "# config: " << r.config.dump() << '\n';
  if (r.rho) out << "# rho: " << rho_to_json(*r.rho).dump() << '\n';
  out << "# summary: " << r.summary.dump() << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

}  // namespace cubic
