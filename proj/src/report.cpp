#include "egonet/report.hpp"

#include <fstream>

#include "json.hpp"

#include "egonet/errors.hpp"

namespace egonet {

std::string EquivalenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["scope"] = scope;
  j["method"] = method;
  if (!omega.empty()) j["omega"] = omega;
  j["per_k"] = nlohmann::ordered_json::array();
  for (const auto& pk : per_k) {
    j["per_k"].push_back({{"k", pk.k}, {"classes", pk.classes}});
  }
  if (sizes) j["sizes"] = *sizes;
  return j.dump(2) + "\n";
}

std::string EquivalenceReport::to_csv() const {
  std::string out = "k,classes\n";
  for (const auto& pk : per_k) {
    out += std::to_string(pk.k) + "," + std::to_string(pk.classes) + "\n";
  }
  return out;
}

void write_report(const EquivalenceReport& rep, const std::string& json_path) {
  std::ofstream jf(json_path, std::ios::binary);
  if (!jf) throw ValidationError("cannot write '" + json_path + "'");
  jf << rep.to_json();

  std::string csv_path = json_path;
  auto dot = csv_path.rfind('.');
  if (dot != std::string::npos && csv_path.find('/', dot) == std::string::npos) {
    csv_path.resize(dot);
  }
  csv_path += ".csv";
  std::ofstream cf(csv_path, std::ios::binary);
  if (!cf) throw ValidationError("cannot write '" + csv_path + "'");
  cf << rep.to_csv();
}

}  // namespace egonet
