#pragma once

// Built-in scenarios: the 2-node congested case, a copper plate, a 5-node
// two-zone system and the 10-node reference week. Random profiles come from
// a fixed-seed mt19937_64 with a hand-rolled uniform mapping, so the data is
// identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "prosumgrid/scenario.hpp"

namespace prosumgrid::synthetic {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

inline constexpr double kPi = 3.14159265358979323846;

// Daily demand shape, 1.0 on average, peaking in the evening.
inline double demand_shape(std::size_t t) {
  double h = static_cast<double>(t % 24);
  return 1.0 + 0.18 * std::sin(2 * kPi * (h - 9) / 24) + 0.08 * std::sin(4 * kPi * (h - 5) / 24);
}

// Clear-sky PV shape: zero at night, peak at 13h.
inline double solar_shape(std::size_t t) {
  double h = static_cast<double>(t % 24);
  if (h <= 6 || h >= 20) return 0.0;
  return std::pow(std::sin(kPi * (h - 6) / 14), 1.5);
}

inline Series pv_profile(Rng& rng, std::size_t hours, double peak) {
  Series v(hours);
  double cloud = 1.0;
  for (std::size_t t = 0; t < hours; ++t) {
    if (t % 24 == 0) cloud = rng.uniform(0.35, 1.0);
    v[t] = std::min(1.0, peak * cloud * solar_shape(t) * rng.uniform(0.85, 1.0));
  }
  return v;
}

// Mean-reverting wind availability in [0.02, 0.98].
inline Series wind_profile(Rng& rng, std::size_t hours, double mean, double level) {
  Series v(hours);
  double x = level;
  for (std::size_t t = 0; t < hours; ++t) {
    x += 0.15 * (mean - x) + rng.uniform(-0.09, 0.09);
    x = std::clamp(x, 0.02, 0.98);
    v[t] = x;
  }
  return v;
}

inline Plant plant(std::string id, std::string node, Tech tech, double cap, double mc) {
  Plant p;
  p.id = std::move(id);
  p.node = std::move(node);
  p.tech = tech;
  p.capacity = cap;
  p.marginal_cost = mc;
  return p;
}

inline Plant renewable(std::string id, std::string node, Tech tech, double cap, Series avail) {
  Plant p = plant(id, std::move(node), tech, cap, 0);
  p.availability_id = id;
  p.availability = std::move(avail);
  return p;
}

/// Nodes A and B in one zone, 30 MW line, 50 MW load at B, cheap plant at A.
inline Scenario two_node(std::size_t hours = 24) {
  Scenario s;
  s.name = "two_node";
  s.hours = hours;
  s.zones = {{"Z", {}, {}}};
  Node a{"A", "Z", Series(hours, 0.0)};
  a.slack = true;
  Node b{"B", "Z", Series(hours, 50.0)};
  s.nodes = {a, b};
  s.lines = {{"AB", "A", "B", 0.1, 30}};
  s.plants = {plant("cheap_A", "A", Tech::lignite, 100, 10), plant("peak_B", "B", Tech::gas, 100, 50)};
  derive(s);
  return s;
}

/// Single node with one plant and unlimited everything.
inline Scenario copper_plate(std::size_t hours = 24) {
  Scenario s;
  s.name = "copper_plate";
  s.hours = hours;
  s.zones = {{"Z", {}, {}}};
  Series load(hours);
  for (std::size_t t = 0; t < hours; ++t) load[t] = 40 * demand_shape(t);
  Node n{"N", "Z", load};
  n.slack = true;
  s.nodes = {n};
  s.plants = {plant("gas", "N", Tech::gas, 100, 45)};
  derive(s);
  return s;
}

/// Five nodes in two zones on a meshed grid. With `unlimited`, all line
/// capacities and exchange limits are infinite.
inline Scenario five_node(std::size_t hours = 48, bool unlimited = true, std::uint64_t seed = 5) {
  Rng rng(seed);
  Scenario s;
  s.name = unlimited ? "five_node_unlimited" : "five_node";
  s.hours = hours;
  double ntc = unlimited ? kUnlimited : 60;
  s.zones = {{"north", {}, {{"south", ntc}}}, {"south", {}, {{"north", ntc}}}};
  const char* ids[] = {"n1", "n2", "n3", "s1", "s2"};
  const double base[] = {60, 35, 45, 80, 50};
  for (int i = 0; i < 5; ++i) {
    Series load(hours);
    for (std::size_t t = 0; t < hours; ++t) load[t] = base[i] * demand_shape(t) * rng.uniform(0.92, 1.08);
    Node node{ids[i], i < 3 ? "north" : "south", load};
    node.household_share = 0.05;
    s.nodes.push_back(std::move(node));
    s.pv_availability[ids[i]] = pv_profile(rng, hours, 0.7);
  }
  double cap = unlimited ? kUnlimited : 70;
  s.lines = {{"n1n2", "n1", "n2", 0.10, cap}, {"n2n3", "n2", "n3", 0.12, cap}, {"n1n3", "n1", "n3", 0.15, cap},
             {"n3s1", "n3", "s1", 0.20, cap}, {"n2s2", "n2", "s2", 0.25, cap}, {"s1s2", "s1", "s2", 0.10, cap}};
  s.plants = {renewable("wind_n1", "n1", Tech::wind_onshore, 120, wind_profile(rng, hours, 0.45, 0.5)),
              plant("lignite_n2", "n2", Tech::lignite, 80, 18),
              plant("coal_n3", "n3", Tech::hard_coal, 60, 32),
              plant("gas_s1", "s1", Tech::gas, 120, 55),
              plant("peaker_s2", "s2", Tech::other_conventional, 60, 90),
              plant("bio_s2", "s2", Tech::biomass, 15, 25)};
  GridStorage ps;
  ps.id = "psp_s1";
  ps.node = "s1";
  ps.power = 20;
  ps.energy = 120;
  s.storages = {ps};
  derive(s);
  return s;
}

/// The 10-node, one-zone reference system. The north hosts wind, lignite and
/// most of the demand; the south relies on gas and imports over a narrow
/// north-south corridor. Households draw a share of every node's load.
inline Scenario reference(std::size_t hours = 168, std::uint64_t seed = 20240601) {
  Rng rng(seed);
  Scenario s;
  s.name = "reference";
  s.hours = hours;
  s.zones = {{"DE", {}, {}}};
  struct NodeSpec {
    const char* id;
    double load;
    double share;
    double pv_peak;
  };
  const NodeSpec spec[] = {{"N1", 260, 0.07, 0.62}, {"N2", 210, 0.08, 0.64}, {"N3", 180, 0.06, 0.66},
                           {"N4", 150, 0.08, 0.66}, {"N5", 120, 0.07, 0.68}, {"S1", 110, 0.07, 0.78},
                           {"S2", 95, 0.08, 0.80},  {"S3", 85, 0.06, 0.80},  {"S4", 70, 0.09, 0.82},
                           {"S5", 60, 0.07, 0.84}};
  Series common(hours);
  for (std::size_t t = 0; t < hours; ++t) common[t] = demand_shape(t) * (t % 168 >= 120 ? 0.9 : 1.0);
  for (const auto& n : spec) {
    Node node{n.id, "DE", Series(hours)};
    for (std::size_t t = 0; t < hours; ++t) node.load[t] = n.load * common[t] * rng.uniform(0.95, 1.05);
    node.household_share = n.share;
    node.rooftop_pv_placeholder_mw = n.load * 0.15;
    node.battery_placeholder_mw = n.load * 0.02;
    node.battery_placeholder_mwh = n.load * 0.06;
    s.pv_availability[n.id] = pv_profile(rng, hours, n.pv_peak);
    s.nodes.push_back(std::move(node));
  }
  s.nodes[0].slack = true;
  s.lines = {
      {"N1N2", "N1", "N2", 0.020, 500}, {"N2N3", "N2", "N3", 0.025, 400}, {"N1N4", "N1", "N4", 0.030, 400},
      {"N3N4", "N3", "N4", 0.025, 350}, {"N4N5", "N4", "N5", 0.020, 400}, {"N3N5", "N3", "N5", 0.030, 350},
      {"N5S1", "N5", "S1", 0.050, 110}, {"N3S2", "N3", "S2", 0.060, 90},  {"S1S2", "S1", "S2", 0.025, 300},
      {"S1S3", "S1", "S3", 0.030, 250}, {"S2S4", "S2", "S4", 0.030, 250}, {"S3S5", "S3", "S5", 0.025, 250},
      {"S4S5", "S4", "S5", 0.030, 200}};
  Series offshore = wind_profile(rng, hours, 0.55, 0.6);
  Series onshore_n = wind_profile(rng, hours, 0.40, 0.45);
  Series onshore_s = wind_profile(rng, hours, 0.25, 0.25);
  s.plants = {renewable("offshore_N1", "N1", Tech::wind_offshore, 420, offshore),
              renewable("onshore_N2", "N2", Tech::wind_onshore, 380, onshore_n),
              renewable("onshore_N4", "N4", Tech::wind_onshore, 260, onshore_n),
              plant("lignite_N3", "N3", Tech::lignite, 260, 22),
              plant("coal_N5", "N5", Tech::hard_coal, 160, 38),
              plant("bio_N4", "N4", Tech::biomass, 40, 30),
              plant("hydro_N2", "N2", Tech::hydro, 25, 5),
              plant("gas_S1", "S1", Tech::gas, 260, 62),
              plant("gas_S3", "S3", Tech::gas, 180, 68),
              plant("peaker_S4", "S4", Tech::other_conventional, 160, 110),
              plant("hydro_S5", "S5", Tech::hydro, 30, 5),
              renewable("park_S2", "S2", Tech::pv_ground, 200, pv_profile(rng, hours, 0.85)),
              renewable("onshore_S5", "S5", Tech::wind_onshore, 120, onshore_s)};
  GridStorage psp;
  psp.id = "psp_S5";
  psp.node = "S5";
  psp.power = 60;
  psp.energy = 480;
  s.storages = {psp};
  s.costs.c_invest_pv = 140000;
  derive(s);
  return s;
}

}  // namespace prosumgrid::synthetic
