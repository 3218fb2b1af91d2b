#pragma once

// Scenario directory loading, validation and saving.
//
// A scenario directory holds scenario.json plus hourly CSV series:
//   load.csv             hour + one column per node (MWh)
//   availability.csv     hour + one column per availability id used by plants
//   pv_availability.csv  hour + one column per node hosting households
//   marginal_cost.csv    optional, hour + one column per plant id

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "prosumgrid/csv.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

struct Issue {
  std::string file;
  std::string position;
  std::string message;

  std::string str() const { return file + (position.empty() ? "" : ": " + position) + ": " + message; }
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<Issue> issues)
      : std::runtime_error(summary(issues)), issues_(std::move(issues)) {}
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  static std::string summary(const std::vector<Issue>& issues) {
    std::string s = std::to_string(issues.size()) + " scenario issue(s)";
    if (!issues.empty()) s += "; first: " + issues.front().str();
    return s;
  }
  std::vector<Issue> issues_;
};

namespace detail {

using nlohmann::json;

class ScenarioReader {
 public:
  explicit ScenarioReader(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::vector<Issue> read(Scenario& s) {
    auto cfg_path = dir_ / "scenario.json";
    json cfg;
    {
      std::ifstream in(cfg_path);
      if (!in) {
        issue("scenario.json", "", "missing file in " + dir_.string());
        return issues_;
      }
      try {
        cfg = json::parse(in);
      } catch (const json::parse_error& e) {
        issue("scenario.json", "byte " + std::to_string(e.byte), "malformed JSON");
        return issues_;
      }
    }
    if (!cfg.is_object()) {
      issue("scenario.json", "", "top level must be an object");
      return issues_;
    }
    s.name = cfg.value("name", dir_.filename().string());
    s.hours_per_year = number(cfg, "hours_per_year", 8760, "", false);
    if (!(s.hours_per_year > 0)) issue("scenario.json", "hours_per_year", "must be positive");
    read_zones(cfg, s);
    read_nodes(cfg, s);
    read_lines(cfg, s);
    read_plants(cfg, s);
    read_storages(cfg, s);
    read_costs(cfg, s);
    read_series(cfg, s);
    if (issues_.empty()) {
      check_slacks(s);
      derive(s);
    }
    return issues_;
  }

 private:
  void issue(std::string file, std::string pos, std::string msg) {
    issues_.push_back({std::move(file), std::move(pos), std::move(msg)});
  }

  // Reads a number field; "inf" strings and null mean unlimited when allowed.
  double number(const json& obj, const char* key, double fallback, const std::string& pos, bool allow_inf) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    std::string where = pos.empty() ? key : pos + "." + key;
    if (v.is_number()) return v.get<double>();
    if (allow_inf && (v.is_null() || (v.is_string() && v.get<std::string>() == "inf"))) return kUnlimited;
    issue("scenario.json", where, allow_inf ? "expected a number or \"inf\"" : "expected a number");
    return fallback;
  }

  std::string text(const json& obj, const char* key, const std::string& pos, bool required = true) {
    if (obj.contains(key) && obj[key].is_string()) return obj[key].get<std::string>();
    if (required) issue("scenario.json", pos, std::string("missing string field '") + key + "'");
    return {};
  }

  const json& array(const json& cfg, const char* key) {
    static const json empty = json::array();
    if (!cfg.contains(key)) return empty;
    if (!cfg[key].is_array()) {
      issue("scenario.json", key, "expected an array");
      return empty;
    }
    return cfg[key];
  }

  static std::string at(const char* table, std::size_t i, const std::string& id) {
    return std::string(table) + "[" + std::to_string(i) + "]" + (id.empty() ? "" : " '" + id + "'");
  }

  void read_zones(const json& cfg, Scenario& s) {
    const json& zones = array(cfg, "zones");
    for (std::size_t i = 0; i < zones.size(); ++i) {
      Zone z;
      std::string pos = at("zones", i, "");
      z.id = text(zones[i], "id", pos);
      pos = at("zones", i, z.id);
      if (zone_ids_.count(z.id)) issue("scenario.json", pos, "duplicate zone id");
      zone_ids_.insert(z.id);
      if (zones[i].contains("exchange_limits")) {
        const json& lim = zones[i]["exchange_limits"];
        if (!lim.is_object()) issue("scenario.json", pos, "exchange_limits must be an object");
        else
          for (auto& [nb, v] : lim.items()) {
            double mw = number(lim, nb.c_str(), 0, pos + ".exchange_limits", true);
            if (mw < 0) issue("scenario.json", pos, "negative exchange limit towards '" + nb + "'");
            z.exchange_limits[nb] = mw;
            (void)v;
          }
      }
      s.zones.push_back(std::move(z));
    }
    if (s.zones.empty()) issue("scenario.json", "zones", "at least one zone required");
    for (std::size_t i = 0; i < s.zones.size(); ++i)
      for (auto& [nb, mw] : s.zones[i].exchange_limits)
        if (!zone_ids_.count(nb) || nb == s.zones[i].id)
          issue("scenario.json", at("zones", i, s.zones[i].id), "exchange limit names unknown zone '" + nb + "'");
  }

  void read_nodes(const json& cfg, Scenario& s) {
    const json& nodes = array(cfg, "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Node n;
      const json& o = nodes[i];
      n.id = text(o, "id", at("nodes", i, ""));
      std::string pos = at("nodes", i, n.id);
      n.zone = text(o, "zone", pos);
      if (node_ids_.count(n.id)) issue("scenario.json", pos, "duplicate node id");
      node_ids_.insert(n.id);
      if (!n.zone.empty() && !zone_ids_.count(n.zone)) issue("scenario.json", pos, "unknown zone '" + n.zone + "'");
      n.household_share = number(o, "household_share", 0, pos, false);
      if (n.household_share < 0 || n.household_share > 1) issue("scenario.json", pos, "household_share outside [0,1]");
      if (o.contains("slack")) {
        if (o["slack"].is_boolean()) n.slack = o["slack"].get<bool>();
        else issue("scenario.json", pos + ".slack", "expected true/false");
      }
      n.rooftop_pv_placeholder_mw = number(o, "rooftop_pv_placeholder_mw", 0, pos, false);
      n.battery_placeholder_mw = number(o, "battery_placeholder_mw", 0, pos, false);
      n.battery_placeholder_mwh = number(o, "battery_placeholder_mwh", 0, pos, false);
      if (n.rooftop_pv_placeholder_mw < 0 || n.battery_placeholder_mw < 0 || n.battery_placeholder_mwh < 0)
        issue("scenario.json", pos, "negative placeholder capacity");
      s.nodes.push_back(std::move(n));
    }
    if (s.nodes.empty()) issue("scenario.json", "nodes", "at least one node required");
  }

  void read_lines(const json& cfg, Scenario& s) {
    const json& lines = array(cfg, "lines");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Line l;
      const json& o = lines[i];
      l.id = text(o, "id", at("lines", i, ""));
      std::string pos = at("lines", i, l.id);
      if (ids.count(l.id)) issue("scenario.json", pos, "duplicate line id");
      ids.insert(l.id);
      l.from = text(o, "from", pos);
      l.to = text(o, "to", pos);
      for (const auto* end : {&l.from, &l.to})
        if (!end->empty() && !node_ids_.count(*end))
          issue("scenario.json", pos, "line '" + l.id + "' references unknown node '" + *end + "'");
      if (l.from == l.to) issue("scenario.json", pos, "line '" + l.id + "' connects a node to itself");
      l.reactance = number(o, "reactance", 0, pos, false);
      if (!(l.reactance > 0)) issue("scenario.json", pos, "reactance must be positive");
      l.capacity = number(o, "capacity", kUnlimited, pos, true);
      if (!(l.capacity > 0)) issue("scenario.json", pos, "capacity must be positive");
      s.lines.push_back(std::move(l));
    }
  }

  void read_plants(const json& cfg, Scenario& s) {
    const json& plants = array(cfg, "plants");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < plants.size(); ++i) {
      Plant p;
      const json& o = plants[i];
      p.id = text(o, "id", at("plants", i, ""));
      std::string pos = at("plants", i, p.id);
      if (ids.count(p.id)) issue("scenario.json", pos, "duplicate plant id");
      ids.insert(p.id);
      p.node = text(o, "node", pos);
      if (!p.node.empty() && !node_ids_.count(p.node)) issue("scenario.json", pos, "unknown node '" + p.node + "'");
      std::string tech = text(o, "tech", pos);
      if (auto t = parse_tech(tech)) p.tech = *t;
      else if (!tech.empty()) issue("scenario.json", pos, "unknown tech '" + tech + "'");
      p.capacity = number(o, "capacity", 0, pos, false);
      if (p.capacity < 0) issue("scenario.json", pos, "negative capacity");
      p.marginal_cost = number(o, "marginal_cost", 0, pos, false);
      p.availability_id = text(o, "availability", pos, false);
      s.plants.push_back(std::move(p));
    }
  }

  void read_storages(const json& cfg, Scenario& s) {
    const json& storages = array(cfg, "storages");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < storages.size(); ++i) {
      GridStorage g;
      const json& o = storages[i];
      g.id = text(o, "id", at("storages", i, ""));
      std::string pos = at("storages", i, g.id);
      if (ids.count(g.id)) issue("scenario.json", pos, "duplicate storage id");
      ids.insert(g.id);
      g.node = text(o, "node", pos);
      if (!g.node.empty() && !node_ids_.count(g.node)) issue("scenario.json", pos, "unknown node '" + g.node + "'");
      g.power = number(o, "power", 0, pos, false);
      g.energy = number(o, "energy", 0, pos, false);
      if (g.power < 0 || g.energy < 0) issue("scenario.json", pos, "negative power or energy");
      g.charge_efficiency = number(o, "charge_efficiency", g.charge_efficiency, pos, false);
      g.discharge_efficiency = number(o, "discharge_efficiency", g.discharge_efficiency, pos, false);
      for (double e : {g.charge_efficiency, g.discharge_efficiency})
        if (!(e > 0 && e <= 1)) issue("scenario.json", pos, "efficiency outside (0,1]");
      g.marginal_cost = number(o, "marginal_cost", 0, pos, false);
      g.self_discharge = number(o, "self_discharge", 0, pos, false);
      if (g.self_discharge < 0 || g.self_discharge >= 1) issue("scenario.json", pos, "self_discharge outside [0,1)");
      s.storages.push_back(std::move(g));
    }
  }

  void read_costs(const json& cfg, Scenario& s) {
    auto section = [&](const char* key) -> const json& {
      static const json empty = json::object();
      if (!cfg.contains(key)) return empty;
      if (!cfg[key].is_object()) {
        issue("scenario.json", key, "expected an object");
        return empty;
      }
      return cfg[key];
    };
    const json& c = section("costs");
    CostBook& k = s.costs;
    std::pair<const char*, double*> cost_fields[] = {
        {"c_curt", &k.c_curt},         {"c_redisp", &k.c_redisp},       {"c_invest_pv", &k.c_invest_pv},
        {"c_fix_pv", &k.c_fix_pv},     {"c_invest_se", &k.c_invest_se}, {"c_invest_sp", &k.c_invest_sp},
        {"c_fix_s", &k.c_fix_s},       {"mc_pv", &k.mc_pv},             {"mc_s", &k.mc_s}};
    for (auto& [key, field] : cost_fields) {
      *field = number(c, key, *field, "costs", false);
      if (*field < 0) issue("scenario.json", std::string("costs.") + key, "must be >= 0");
    }
    if (c.contains("voll") && c["voll"].is_null()) k.voll = 0;
    else k.voll = number(c, "voll", k.voll, "costs", false);
    if (k.voll < 0) issue("scenario.json", "costs.voll", "must be >= 0 (0 or null disables lost load)");

    const json& t = section("tariff");
    std::pair<const char*, double*> tariff_fields[] = {
        {"t_fix", &s.tariff.t_fix}, {"t_var", &s.tariff.t_var}, {"t_feed", &s.tariff.t_feed}};
    for (auto& [key, field] : tariff_fields) {
      *field = number(t, key, *field, "tariff", false);
      if (*field < 0) issue("scenario.json", std::string("tariff.") + key, "negative tariff rejected");
    }

    const json& h = section("home_battery");
    HomeBattery& b = s.home_battery;
    b.self_discharge = number(h, "self_discharge", b.self_discharge, "home_battery", false);
    b.charge_efficiency = number(h, "charge_efficiency", b.charge_efficiency, "home_battery", false);
    b.discharge_efficiency = number(h, "discharge_efficiency", b.discharge_efficiency, "home_battery", false);
    if (b.self_discharge < 0 || b.self_discharge >= 1) issue("scenario.json", "home_battery", "self_discharge outside [0,1)");
    for (double e : {b.charge_efficiency, b.discharge_efficiency})
      if (!(e > 0 && e <= 1)) issue("scenario.json", "home_battery", "efficiency outside (0,1]");
  }

  struct SeriesFile {
    std::string file;
    std::size_t rows = 0;
    std::map<std::string, Series> columns;
  };

  // Reads an hourly CSV: 'hour' column 0..T-1 plus numeric columns.
  bool read_csv(const std::string& file, SeriesFile& out) {
    csv::Table t;
    try {
      t = csv::read(dir_ / file);
    } catch (const std::exception&) {
      issue(file, "", "missing or unreadable file");
      return false;
    }
    out.file = file;
    out.rows = t.rows.size();
    long hour_col = t.column("hour");
    if (hour_col < 0) issue(file, "header", "missing 'hour' column");
    std::set<std::string> seen;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (static_cast<long>(c) == hour_col) continue;
      if (!seen.insert(t.header[c]).second) issue(file, "header", "duplicate column '" + t.header[c] + "'");
      out.columns[t.header[c]].assign(t.rows.size(), 0.0);
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::string pos = "line " + std::to_string(t.lines[r]);
      if (t.rows[r].size() != t.header.size()) {
        issue(file, pos, "expected " + std::to_string(t.header.size()) + " cells, found " +
                             std::to_string(t.rows[r].size()));
        continue;
      }
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        double v;
        if (!csv::parse_number(t.rows[r][c], v) || !std::isfinite(v)) {
          issue(file, pos, "column '" + t.header[c] + "': not a finite number '" + t.rows[r][c] + "'");
          continue;
        }
        if (static_cast<long>(c) == hour_col) {
          if (v != static_cast<double>(r)) issue(file, pos, "hour " + t.rows[r][c] + " out of sequence, expected " + std::to_string(r));
        } else {
          out.columns[t.header[c]][r] = v;
        }
      }
    }
    return true;
  }

  void check_length(const SeriesFile& f, std::size_t hours, const std::string& reference) {
    if (f.rows != hours)
      issue(f.file, "", "series length mismatch: " + f.file + " has " + std::to_string(f.rows) + " hours, " +
                            reference + " has " + std::to_string(hours));
  }

  void read_series(const json& cfg, Scenario& s) {
    std::map<std::string, std::string> files = {{"load", "load.csv"},
                                                {"availability", "availability.csv"},
                                                {"pv_availability", "pv_availability.csv"},
                                                {"marginal_cost", ""}};
    if (cfg.contains("files") && cfg["files"].is_object())
      for (auto& [k, v] : cfg["files"].items())
        if (v.is_string() && files.count(k)) files[k] = v.get<std::string>();

    SeriesFile load;
    if (!read_csv(files["load"], load)) return;
    std::size_t hours = load.rows;
    if (cfg.contains("hours")) {
      double h = number(cfg, "hours", 0, "", false);
      if (h != static_cast<double>(hours))
        issue(files["load"], "", "series length mismatch: " + files["load"] + " has " + std::to_string(hours) +
                                     " hours, scenario.json declares " + csv::num(h));
    }
    if (hours == 0) issue(files["load"], "", "no hourly rows");
    s.hours = hours;
    std::string ref = files["load"];
    for (auto& n : s.nodes) {
      auto it = load.columns.find(n.id);
      if (it == load.columns.end()) {
        issue(files["load"], "header", "no column for node '" + n.id + "'");
        continue;
      }
      n.load = it->second;
      for (std::size_t t = 0; t < n.load.size(); ++t)
        if (n.load[t] < 0) issue(files["load"], "hour " + std::to_string(t), "negative load at node '" + n.id + "'");
    }

    bool need_avail = false;
    for (auto& p : s.plants) need_avail |= !p.availability_id.empty();
    if (need_avail) {
      SeriesFile av;
      if (read_csv(files["availability"], av)) {
        check_length(av, hours, ref);
        for (std::size_t i = 0; i < s.plants.size(); ++i) {
          Plant& p = s.plants[i];
          if (p.availability_id.empty()) continue;
          auto it = av.columns.find(p.availability_id);
          if (it == av.columns.end()) {
            issue(files["availability"], "header",
                  "no column '" + p.availability_id + "' (plant '" + p.id + "')");
            continue;
          }
          p.availability = it->second;
          for (std::size_t t = 0; t < p.availability.size(); ++t)
            if (p.availability[t] < 0 || p.availability[t] > 1) {
              issue(files["availability"], "hour " + std::to_string(t),
                    "column '" + p.availability_id + "' outside [0,1]");
              break;
            }
        }
      }
    }

    bool need_pv = false;
    for (auto& n : s.nodes) need_pv |= n.household_share > 0;
    if (need_pv || std::filesystem::exists(dir_ / files["pv_availability"])) {
      SeriesFile pv;
      if (read_csv(files["pv_availability"], pv)) {
        check_length(pv, hours, ref);
        for (auto& [id, series] : pv.columns) {
          if (!node_ids_.count(id)) {
            issue(files["pv_availability"], "header", "column '" + id + "' names no node");
            continue;
          }
          for (double v : series)
            if (v < 0 || v > 1) {
              issue(files["pv_availability"], "", "column '" + id + "' outside [0,1]");
              break;
            }
          s.pv_availability[id] = series;
        }
        for (auto& n : s.nodes)
          if (n.household_share > 0 && !pv.columns.count(n.id))
            issue(files["pv_availability"], "header", "no column for household node '" + n.id + "'");
      }
    }

    if (!files["marginal_cost"].empty()) {
      SeriesFile mc;
      if (read_csv(files["marginal_cost"], mc)) {
        check_length(mc, hours, ref);
        for (auto& [id, series] : mc.columns) {
          bool found = false;
          for (auto& p : s.plants)
            if (p.id == id) {
              p.marginal_cost_series = series;
              found = true;
            }
          if (!found) issue(files["marginal_cost"], "header", "column '" + id + "' names no plant");
        }
      }
    }
  }

  void check_slacks(const Scenario& s) {
    auto comp = components(s);
    std::map<std::size_t, int> flagged;
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      if (s.nodes[i].slack && ++flagged[comp[i]] == 2)
        issue("scenario.json", at("nodes", i, s.nodes[i].id), "second slack node in one connected component");
  }

  std::filesystem::path dir_;
  std::vector<Issue> issues_;
  std::set<std::string> zone_ids_, node_ids_;
};

inline json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

}  // namespace detail

/// Loads and validates a scenario directory; returns the issues found
/// (empty on success, in which case `out` is fully populated).
inline std::vector<Issue> check_scenario(const std::filesystem::path& dir, Scenario& out) {
  out = Scenario{};
  return detail::ScenarioReader(dir).read(out);
}

/// Loads a scenario directory. Throws ScenarioError listing every issue.
inline Scenario load_scenario(const std::filesystem::path& dir) {
  Scenario s;
  auto issues = check_scenario(dir, s);
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return s;
}

/// Writes `s` as a scenario directory that loads back to an equal Scenario.
inline void save_scenario(const Scenario& s, const std::filesystem::path& dir) {
  using detail::json;
  std::filesystem::create_directories(dir);
  json cfg;
  cfg["name"] = s.name;
  cfg["hours"] = s.hours;
  cfg["hours_per_year"] = s.hours_per_year;
  cfg["files"] = {{"load", "load.csv"}, {"availability", "availability.csv"}, {"pv_availability", "pv_availability.csv"}};
  bool any_mc = false;
  for (const auto& p : s.plants) any_mc |= !p.marginal_cost_series.empty();
  if (any_mc) cfg["files"]["marginal_cost"] = "marginal_cost.csv";

  cfg["zones"] = json::array();
  for (const auto& z : s.zones) {
    json o = {{"id", z.id}};
    if (!z.exchange_limits.empty()) {
      o["exchange_limits"] = json::object();
      for (auto& [nb, mw] : z.exchange_limits) o["exchange_limits"][nb] = detail::number_or_inf(mw);
    }
    cfg["zones"].push_back(o);
  }
  cfg["nodes"] = json::array();
  for (const auto& n : s.nodes)
    cfg["nodes"].push_back({{"id", n.id},
                            {"zone", n.zone},
                            {"household_share", n.household_share},
                            {"slack", n.slack},
                            {"rooftop_pv_placeholder_mw", n.rooftop_pv_placeholder_mw},
                            {"battery_placeholder_mw", n.battery_placeholder_mw},
                            {"battery_placeholder_mwh", n.battery_placeholder_mwh}});
  cfg["lines"] = json::array();
  for (const auto& l : s.lines)
    cfg["lines"].push_back({{"id", l.id},
                            {"from", l.from},
                            {"to", l.to},
                            {"reactance", l.reactance},
                            {"capacity", detail::number_or_inf(l.capacity)}});
  cfg["plants"] = json::array();
  for (const auto& p : s.plants) {
    json o = {{"id", p.id},
              {"node", p.node},
              {"tech", to_string(p.tech)},
              {"capacity", p.capacity},
              {"marginal_cost", p.marginal_cost}};
    if (!p.availability_id.empty()) o["availability"] = p.availability_id;
    cfg["plants"].push_back(o);
  }
  cfg["storages"] = json::array();
  for (const auto& g : s.storages)
    cfg["storages"].push_back({{"id", g.id},
                               {"node", g.node},
                               {"power", g.power},
                               {"energy", g.energy},
                               {"charge_efficiency", g.charge_efficiency},
                               {"discharge_efficiency", g.discharge_efficiency},
                               {"marginal_cost", g.marginal_cost},
                               {"self_discharge", g.self_discharge}});
  const CostBook& c = s.costs;
  cfg["costs"] = {{"c_curt", c.c_curt},           {"c_redisp", c.c_redisp},       {"voll", c.voll},
                  {"c_invest_pv", c.c_invest_pv}, {"c_fix_pv", c.c_fix_pv},       {"c_invest_se", c.c_invest_se},
                  {"c_invest_sp", c.c_invest_sp}, {"c_fix_s", c.c_fix_s},         {"mc_pv", c.mc_pv},
                  {"mc_s", c.mc_s}};
  cfg["tariff"] = {{"t_fix", s.tariff.t_fix}, {"t_var", s.tariff.t_var}, {"t_feed", s.tariff.t_feed}};
  cfg["home_battery"] = {{"self_discharge", s.home_battery.self_discharge},
                         {"charge_efficiency", s.home_battery.charge_efficiency},
                         {"discharge_efficiency", s.home_battery.discharge_efficiency}};
  {
    std::ofstream out(dir / "scenario.json");
    out << cfg.dump(2) << "\n";
  }

  auto write_series = [&](const std::string& file, const std::vector<std::pair<std::string, const Series*>>& cols) {
    csv::Writer w(dir / file);
    std::vector<std::string> header = {"hour"};
    for (auto& [id, v] : cols) header.push_back(id);
    w.row(header);
    for (std::size_t t = 0; t < s.hours; ++t) {
      std::vector<std::string> cells = {std::to_string(t)};
      for (auto& [id, v] : cols) cells.push_back(csv::num((*v)[t]));
      w.row(cells);
    }
    w.close();
  };

  std::vector<std::pair<std::string, const Series*>> cols;
  for (const auto& n : s.nodes) cols.emplace_back(n.id, &n.load);
  write_series("load.csv", cols);

  cols.clear();
  std::set<std::string> seen;
  for (const auto& p : s.plants)
    if (!p.availability_id.empty() && seen.insert(p.availability_id).second)
      cols.emplace_back(p.availability_id, &p.availability);
  write_series("availability.csv", cols);

  cols.clear();
  for (const auto& [id, v] : s.pv_availability) cols.emplace_back(id, &v);
  write_series("pv_availability.csv", cols);

  if (any_mc) {
    cols.clear();
    for (const auto& p : s.plants)
      if (!p.marginal_cost_series.empty()) cols.emplace_back(p.id, &p.marginal_cost_series);
    write_series("marginal_cost.csv", cols);
  }
}

}  // namespace prosumgrid
