#pragma once

// Post-hoc balance check of one regime output directory. Reads only the
// CSV files (loads.csv, dispatch.csv, prosumer_net.csv,
// line_utilization.csv) with its own parser and recomputes every energy
// balance from the reported quantities.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace verify {

struct Sheet {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("missing column " + name);
  }
};

inline Sheet read_sheet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Sheet s;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(l);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw std::runtime_error("empty " + path.string());
  s.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) s.rows.push_back(split(line));
  return s;
}

inline double number(const std::string& s) {
  if (s == "inf") return INFINITY;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number '" + s + "'");
  return v;
}

struct Residuals {
  double step3_balance = 0;          // per node (nodal) or zone (zonal) and hour
  double step3_injection_sum = 0;    // nodal only
  double redispatch_balance = 0;     // per node and hour
  double redispatch_injection_sum = 0;
  double redispatch_schedule = 0;    // plant = day-ahead + up - down
  double line_overload = 0;          // max(|flow| - capacity, 0) after redispatch
  double prosumer_demand = 0;        // shortfall of purchase + discharge + direct use
  double prosumer_split = 0;         // PV split vs available PV
  double prosumer_net = 0;           // net = feed-in - purchase
  std::size_t balances_checked = 0;
  bool nodal = false;

  double worst() const {
    return std::max({step3_balance, step3_injection_sum, redispatch_balance, redispatch_injection_sum,
                     redispatch_schedule, line_overload, prosumer_demand, prosumer_split, prosumer_net});
  }
};

inline Residuals check_regime_dir(const std::filesystem::path& dir) {
  Residuals r;
  using Grid = std::map<std::string, std::vector<double>>;  // key -> hourly values
  auto add = [](Grid& g, const std::string& key, std::size_t t, double v) {
    auto& s = g[key];
    if (s.size() <= t) s.resize(t + 1, 0.0);
    s[t] += v;
  };
  auto at = [](const Grid& g, const std::string& key, std::size_t t) {
    auto it = g.find(key);
    return it == g.end() || it->second.size() <= t ? 0.0 : it->second[t];
  };

  Sheet loads = read_sheet(dir / "loads.csv");
  std::map<std::string, std::string> zone_of;
  std::vector<std::string> nodes;
  Grid load, pdemand;
  std::size_t hours = 0;
  {
    auto cn = loads.col("node"), cz = loads.col("zone"), ch = loads.col("hour"), cl = loads.col("load_mwh"),
         cp = loads.col("prosumer_demand_mwh");
    for (const auto& row : loads.rows) {
      if (!zone_of.count(row[cn])) nodes.push_back(row[cn]);
      zone_of[row[cn]] = row[cz];
      std::size_t t = std::stoul(row[ch]);
      hours = std::max(hours, t + 1);
      add(load, row[cn], t, number(row[cl]));
      add(pdemand, row[cn], t, number(row[cp]));
    }
  }

  Sheet pn = read_sheet(dir / "prosumer_net.csv");
  Grid net;
  {
    auto c = [&](const char* n) { return pn.col(n); };
    auto cn = c("node"), ch = c("hour"), cd = c("demand_mwh"), ca = c("pv_available_mwh"), cf = c("purchase_mwh"),
         cs = c("self_use_mwh"), cb = c("to_battery_mwh"), cg = c("feed_in_mwh"), cc = c("curtailment_mwh"),
         cx = c("discharge_mwh"), cnet = c("net_mwh");
    for (const auto& row : pn.rows) {
      std::size_t t = std::stoul(row[ch]);
      double d = number(row[cd]), f = number(row[cf]), self = number(row[cs]), bat = number(row[cb]),
             feed = number(row[cg]), curt = number(row[cc]), dis = number(row[cx]), nv = number(row[cnet]);
      r.prosumer_demand = std::max(r.prosumer_demand, d - (f + dis + self));
      r.prosumer_demand = std::max(r.prosumer_demand, std::abs(d - at(pdemand, row[cn], t)));
      r.prosumer_split = std::max(r.prosumer_split, std::abs(self + bat + feed + curt - number(row[ca])));
      r.prosumer_net = std::max(r.prosumer_net, std::abs(nv - (feed - f)));
      add(net, row[cn], t, nv);
    }
  }

  // stage|kind|location -> hourly sum, and stage|kind|id for schedules
  Sheet disp = read_sheet(dir / "dispatch.csv");
  Grid by_loc, by_id;
  {
    auto cs = disp.col("stage"), ck = disp.col("kind"), ci = disp.col("id"), cl = disp.col("location"),
         ch = disp.col("hour"), cm = disp.col("mw");
    for (const auto& row : disp.rows) {
      std::size_t t = std::stoul(row[ch]);
      double v = number(row[cm]);
      std::string head = row[cs] + "|" + row[ck] + "|";
      add(by_loc, head + row[cl], t, v);
      add(by_id, head + row[ci], t, v);
      if (row[cs] == "step3" && row[ck] == "injection") r.nodal = true;
    }
  }

  auto supply3 = [&](const std::string& n, std::size_t t) {
    auto g = [&](const char* kind) { return at(by_loc, std::string("step3|") + kind + "|" + n, t); };
    return g("plant") + g("storage_gen") - g("storage_charge") + g("rooftop") + g("home_gen") - g("home_charge") +
           g("lost_load");
  };
  for (std::size_t t = 0; t < hours; ++t) {
    if (r.nodal) {
      double sum = 0;
      for (const auto& n : nodes) {
        double inj = at(by_loc, "step3|injection|" + n, t);
        sum += inj;
        r.step3_balance = std::max(r.step3_balance, std::abs(supply3(n, t) - inj - at(load, n, t)));
        ++r.balances_checked;
      }
      r.step3_injection_sum = std::max(r.step3_injection_sum, std::abs(sum));
    } else {
      std::map<std::string, double> zone_gap;
      for (const auto& n : nodes) zone_gap[zone_of[n]] += supply3(n, t) - at(load, n, t);
      for (auto& [z, gap] : zone_gap) {
        r.step3_balance = std::max(r.step3_balance, std::abs(gap - at(by_loc, "step3|net_export|" + z, t)));
        ++r.balances_checked;
      }
    }

    double sum = 0;
    for (const auto& n : nodes) {
      auto g = [&](const char* kind) { return at(by_loc, std::string("redispatch|") + kind + "|" + n, t); };
      double inj = g("injection");
      sum += inj;
      double supply = g("plant") + g("storage_gen") - g("storage_charge") + g("lost_load") - g("prosumer_curtailment");
      double demand = at(load, n, t) - at(pdemand, n, t) - at(net, n, t);
      r.redispatch_balance = std::max(r.redispatch_balance, std::abs(supply - inj - demand));
      ++r.balances_checked;
    }
    r.redispatch_injection_sum = std::max(r.redispatch_injection_sum, std::abs(sum));
  }

  for (const auto& [key, series] : by_id) {
    if (key.rfind("redispatch|plant|", 0) != 0) continue;
    std::string id = key.substr(std::string("redispatch|plant|").size());
    for (std::size_t t = 0; t < series.size(); ++t) {
      double expect = at(by_id, "step3|plant|" + id, t) + at(by_id, "redispatch|up|" + id, t) -
                      at(by_id, "redispatch|down|" + id, t);
      r.redispatch_schedule = std::max(r.redispatch_schedule, std::abs(series[t] - expect));
    }
  }

  Sheet lines = read_sheet(dir / "line_utilization.csv");
  auto cl = lines.col("line"), cc = lines.col("capacity_mw");
  for (const auto& row : lines.rows) {
    double cap = number(row[cc]);
    auto it = by_id.find("redispatch|flow|" + row[cl]);
    if (it == by_id.end() || std::isinf(cap)) continue;
    for (double f : it->second) r.line_overload = std::max(r.line_overload, std::abs(f) - cap);
  }
  return r;
}

}  // namespace verify
