#pragma once

// Study manifest: which scenario to run, which regimes, where to write.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyManifest {
  std::filesystem::path scenario;
  std::vector<std::string> regimes;  // empty: all four
  std::optional<std::size_t> horizon;
  std::filesystem::path output;
  std::optional<std::size_t> workers;
};

/// Reads a JSON manifest. Relative paths are resolved against its directory.
inline StudyManifest load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ManifestError(file.string() + ": cannot open manifest");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ManifestError(file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ManifestError(file.string() + ": manifest must be an object");
  auto base = file.parent_path();
  auto path = [&](const char* key) -> std::filesystem::path {
    if (!j.contains(key) || !j[key].is_string()) throw ManifestError(file.string() + ": missing string '" + key + "'");
    std::filesystem::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  auto count = [&](const char* key) -> std::optional<std::size_t> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number_integer() || j[key].get<long>() <= 0)
      throw ManifestError(file.string() + ": '" + key + "' must be a positive integer");
    return j[key].get<std::size_t>();
  };
  StudyManifest m;
  m.scenario = path("scenario");
  m.output = path("output");
  if (j.contains("regimes")) {
    if (!j["regimes"].is_array()) throw ManifestError(file.string() + ": 'regimes' must be a list");
    for (const auto& r : j["regimes"]) {
      if (!r.is_string()) throw ManifestError(file.string() + ": regime names must be strings");
      m.regimes.push_back(r.get<std::string>());
    }
    if (m.regimes.empty()) throw ManifestError(file.string() + ": at least one regime required");
  }
  m.horizon = count("horizon");
  m.workers = count("workers");
  return m;
}

/// Maps regime names to regimes; empty selects all four in table order.
inline std::vector<TariffRegime> select_regimes(const std::vector<std::string>& names, const Tariff& t) {
  if (names.empty()) return all_regimes(t);
  std::vector<TariffRegime> out;
  for (const auto& n : names) {
    auto r = parse_regime(n, t);
    if (!r) throw ManifestError("unknown regime '" + n + "'");
    for (const auto& seen : out)
      if (seen.name() == n) throw ManifestError("regime '" + n + "' listed twice");
    out.push_back(*r);
  }
  return out;
}

/// Worker count: flag, then PROSUMGRID_WORKERS, then manifest, then 1.
inline std::size_t resolve_workers(std::optional<std::size_t> flag, std::optional<std::size_t> manifest) {
  if (flag) return std::max<std::size_t>(1, *flag);
  if (const char* env = std::getenv("PROSUMGRID_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ManifestError("PROSUMGRID_WORKERS must be a positive integer");
  }
  if (manifest) return *manifest;
  return 1;
}

}  // namespace prosumgrid
