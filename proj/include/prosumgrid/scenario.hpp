#pragma once

// Domain data model: network, fleet, household clusters, costs and tariffs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prosumgrid {

using Series = std::vector<double>;

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();
inline constexpr double kHouseholdAnnualMWh = 3.5;
inline constexpr double kPvCapPerHouseholdMW = 0.01;

enum class Tech {
  hard_coal,
  lignite,
  gas,
  other_conventional,
  biomass,
  hydro,
  wind_onshore,
  wind_offshore,
  pv_ground,
};

inline const std::vector<std::pair<Tech, const char*>>& tech_names() {
  static const std::vector<std::pair<Tech, const char*>> names = {
      {Tech::hard_coal, "hard_coal"},     {Tech::lignite, "lignite"},
      {Tech::gas, "gas"},                 {Tech::other_conventional, "other_conventional"},
      {Tech::biomass, "biomass"},         {Tech::hydro, "hydro"},
      {Tech::wind_onshore, "wind_onshore"}, {Tech::wind_offshore, "wind_offshore"},
      {Tech::pv_ground, "pv_ground"},
  };
  return names;
}

inline const char* to_string(Tech t) {
  for (auto& [tech, name] : tech_names())
    if (tech == t) return name;
  return "?";
}

inline std::optional<Tech> parse_tech(const std::string& s) {
  for (auto& [tech, name] : tech_names())
    if (s == name) return tech;
  return std::nullopt;
}

// Wind and ground PV follow their availability and can only be curtailed.
inline bool is_variable_renewable(Tech t) {
  return t == Tech::wind_onshore || t == Tech::wind_offshore || t == Tech::pv_ground;
}

enum class Market { zonal, nodal };
enum class Pricing { real_time, time_invariant };

inline const char* to_string(Market m) { return m == Market::zonal ? "zonal" : "nodal"; }
inline const char* to_string(Pricing p) { return p == Pricing::real_time ? "rtp" : "time_invariant"; }

struct Zone {
  std::string id;
  std::vector<std::string> members;                // derived from nodes, file order
  std::map<std::string, double> exchange_limits;  // neighbor -> MW from this zone
  bool operator==(const Zone&) const = default;
};

struct Node {
  std::string id;
  std::string zone;
  Series load;                  // MWh per hour
  double household_share = 0;   // fraction of load drawn by households
  bool slack = false;
  int household_count = 0;      // derived
  double rooftop_pv_placeholder_mw = 0;
  double battery_placeholder_mw = 0;
  double battery_placeholder_mwh = 0;
  bool operator==(const Node&) const = default;
};

struct Line {
  std::string id;
  std::string from;
  std::string to;
  double reactance = 0;           // per unit on a 1 MW base
  double capacity = kUnlimited;   // MW
  bool operator==(const Line&) const = default;
};

struct Plant {
  std::string id;
  std::string node;
  Tech tech = Tech::gas;
  double capacity = 0;        // MW
  double marginal_cost = 0;   // EUR/MWh
  Series marginal_cost_series;  // optional, overrides marginal_cost
  std::string availability_id;  // empty: always available
  Series availability;          // resolved, in [0,1]

  double mc(std::size_t t) const { return marginal_cost_series.empty() ? marginal_cost : marginal_cost_series[t]; }
  double available(std::size_t t) const { return capacity * (availability.empty() ? 1.0 : availability[t]); }
  bool operator==(const Plant&) const = default;
};

struct GridStorage {
  std::string id;
  std::string node;
  double power = 0;    // MW
  double energy = 0;   // MWh
  double charge_efficiency = std::sqrt(0.9);
  double discharge_efficiency = std::sqrt(0.9);
  double marginal_cost = 0;
  double self_discharge = 0;  // fraction per hour
  bool operator==(const GridStorage&) const = default;
};

struct ProsumerCluster {
  std::string node;
  int household_count = 0;
  Series demand;           // MWh per hour, 3.5 MWh/yr per household
  Series pv_availability;  // in [0,1]
  double pv_cap = 0;       // MW
  bool operator==(const ProsumerCluster&) const = default;
};

struct CostBook {
  double c_curt = 0;
  double c_redisp = 50;
  double voll = 3000;  // <= 0 disables lost load
  double c_invest_pv = 100000;  // EUR/MW-yr, annualized
  double c_fix_pv = 20000;
  double c_invest_se = 30000;  // EUR/MWh-yr
  double c_invest_sp = 15000;  // EUR/MW-yr
  double c_fix_s = 5000;
  double mc_pv = 0;
  double mc_s = 0;
  bool operator==(const CostBook&) const = default;
};

struct Tariff {
  double t_fix = 0;
  double t_var = 250;
  double t_feed = 60;
  bool operator==(const Tariff&) const = default;
};

struct HomeBattery {
  double self_discharge = 0.00005;
  double charge_efficiency = 0.95;
  double discharge_efficiency = 0.95;
  bool operator==(const HomeBattery&) const = default;
};

struct TariffRegime {
  Market market = Market::zonal;
  Pricing pricing = Pricing::time_invariant;
  double t_fix = 0;
  double t_var = 0;
  double t_feed = 0;
  int binary_nodal = 0;
  int binary_zonal = 0;

  static TariffRegime make(Market m, Pricing p, const Tariff& t) {
    TariffRegime r{m, p, t.t_fix, t.t_var, t.t_feed, 0, 0};
    if (p == Pricing::real_time) (m == Market::nodal ? r.binary_nodal : r.binary_zonal) = 1;
    return r;
  }

  std::string name() const { return std::string(to_string(market)) + "_" + to_string(pricing); }

  void validate() const {
    if (t_fix < 0 || t_var < 0 || t_feed < 0) throw std::invalid_argument("negative tariff component");
    if (binary_nodal + binary_zonal > 1) throw std::invalid_argument("both real-time flags set");
    bool rtp = binary_nodal + binary_zonal == 1;
    if (rtp != (pricing == Pricing::real_time)) throw std::invalid_argument("real-time flag inconsistent with pricing");
    if (binary_nodal && market != Market::nodal) throw std::invalid_argument("nodal flag on a zonal market");
    if (binary_zonal && market != Market::zonal) throw std::invalid_argument("zonal flag on a nodal market");
  }
};

/// Regimes in comparison-table order.
inline std::vector<TariffRegime> all_regimes(const Tariff& t) {
  return {TariffRegime::make(Market::zonal, Pricing::time_invariant, t),
          TariffRegime::make(Market::zonal, Pricing::real_time, t),
          TariffRegime::make(Market::nodal, Pricing::time_invariant, t),
          TariffRegime::make(Market::nodal, Pricing::real_time, t)};
}

inline std::optional<TariffRegime> parse_regime(const std::string& name, const Tariff& t) {
  for (const auto& r : all_regimes(t))
    if (r.name() == name) return r;
  return std::nullopt;
}

struct Scenario {
  std::string name;
  std::size_t hours = 0;
  double hours_per_year = 8760;
  std::vector<Zone> zones;
  std::vector<Node> nodes;
  std::vector<Line> lines;
  std::vector<Plant> plants;
  std::vector<GridStorage> storages;
  std::vector<ProsumerCluster> clusters;  // derived, one per node with households
  std::map<std::string, Series> pv_availability;  // per node id
  CostBook costs;
  Tariff tariff;
  HomeBattery home_battery;

  bool operator==(const Scenario&) const = default;

  std::size_t node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return i;
    throw std::out_of_range("unknown node '" + id + "'");
  }
  std::size_t zone_index(const std::string& id) const {
    for (std::size_t i = 0; i < zones.size(); ++i)
      if (zones[i].id == id) return i;
    throw std::out_of_range("unknown zone '" + id + "'");
  }
  const ProsumerCluster* cluster_at(const std::string& node) const {
    for (const auto& c : clusters)
      if (c.node == node) return &c;
    return nullptr;
  }

  double zonal_load(std::size_t z, std::size_t t) const {
    double s = 0;
    for (const auto& n : nodes)
      if (n.zone == zones[z].id) s += n.load[t];
    return s;
  }

  /// Node load minus the prosumer cluster demand it hosts.
  double residual_load(std::size_t n, std::size_t t) const {
    const auto* c = cluster_at(nodes[n].id);
    return nodes[n].load[t] - (c ? c->demand[t] : 0.0);
  }
};

/// Households from annual household energy: nearest integer of E / 3.5 MWh.
inline int derive_households(double annual_household_mwh) {
  if (!(annual_household_mwh >= 0)) throw std::invalid_argument("negative household energy");
  return static_cast<int>(std::llround(annual_household_mwh / kHouseholdAnnualMWh));
}

/// Households from a node load series, its household share and the
/// hours-per-year used to annualize the horizon.
inline int derive_households(const Series& node_load, double household_share, double hours_per_year) {
  double sum = 0;
  for (double v : node_load) {
    if (v < 0) throw std::invalid_argument("negative load");
    sum += v;
  }
  if (node_load.empty()) return 0;
  return derive_households(household_share * sum * hours_per_year / node_load.size());
}

/// Builds the representative cluster of node n (household_count must be set).
inline ProsumerCluster make_cluster(const Node& node, const Series& pv_availability, double hours_per_year) {
  ProsumerCluster c;
  c.node = node.id;
  c.household_count = node.household_count;
  c.pv_cap = kPvCapPerHouseholdMW * node.household_count;
  c.pv_availability = pv_availability;
  c.demand.assign(node.load.size(), 0.0);
  double annual = 0;
  for (double v : node.load) annual += node.household_share * v;
  annual *= hours_per_year / static_cast<double>(node.load.size());
  if (annual > 0) {
    double scale = node.household_count * kHouseholdAnnualMWh / annual;
    for (std::size_t t = 0; t < node.load.size(); ++t) c.demand[t] = node.household_share * node.load[t] * scale;
  }
  return c;
}

/// Connected component id per node (lines with unknown endpoints ignored).
inline std::vector<std::size_t> components(const Scenario& s) {
  std::vector<std::size_t> parent(s.nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index = [&](const std::string& id) {
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      if (s.nodes[i].id == id) return static_cast<long>(i);
    return -1L;
  };
  for (const auto& l : s.lines) {
    long a = index(l.from), b = index(l.to);
    if (a < 0 || b < 0) continue;
    std::size_t ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> comp(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) comp[i] = find(i);
  return comp;
}

/// Recomputes zone membership, slack flags, household counts and clusters.
inline void derive(Scenario& s) {
  auto comp = components(s);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    bool flagged = false;
    for (std::size_t j = 0; j < s.nodes.size(); ++j) flagged |= comp[j] == comp[i] && s.nodes[j].slack;
    if (!flagged) s.nodes[i].slack = true;  // first node of its component
  }
  for (auto& z : s.zones) z.members.clear();
  for (const auto& n : s.nodes)
    for (auto& z : s.zones)
      if (z.id == n.zone) z.members.push_back(n.id);
  s.clusters.clear();
  for (auto& n : s.nodes) {
    n.household_count = derive_households(n.load, n.household_share, s.hours_per_year);
    if (n.household_count == 0) continue;
    auto it = s.pv_availability.find(n.id);
    Series avail = it != s.pv_availability.end() ? it->second : Series(s.hours, 0.0);
    s.clusters.push_back(make_cluster(n, avail, s.hours_per_year));
  }
}

/// Copy restricted to the first `hours` hours, with derived data recomputed.
inline Scenario with_horizon(const Scenario& s, std::size_t hours) {
  if (hours == 0 || hours > s.hours) throw std::invalid_argument("horizon override outside 1.." + std::to_string(s.hours));
  Scenario r = s;
  auto cut = [hours](Series& v) {
    if (v.size() > hours) v.resize(hours);
  };
  r.hours = hours;
  for (auto& n : r.nodes) cut(n.load);
  for (auto& p : r.plants) {
    cut(p.availability);
    cut(p.marginal_cost_series);
  }
  for (auto& [id, v] : r.pv_availability) cut(v);
  derive(r);
  return r;
}

}  // namespace prosumgrid
