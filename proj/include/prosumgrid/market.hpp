#pragma once

// Day-ahead market clearing (zonal or nodal) and price extraction.
//
// Variable renewables (wind, ground PV, rooftop PV) are modeled by their
// infeed G in [0, cap * avail]; curtailment is CU = cap * avail - G, so its
// cost enters as an objective offset plus -c_curt on G.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "prosumgrid/grid_flow.hpp"
#include "prosumgrid/lp/problem.hpp"
#include "prosumgrid/lp/simplex.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, lp::Status status) : std::runtime_error(what), status_(status) {}
  lp::Status status() const { return status_; }

 private:
  lp::Status status_;
};

/// Market-side rooftop PV and home battery capacity per node.
struct ProsumerAssets {
  Series pv_mw;
  Series battery_mw;
  Series battery_mwh;

  static ProsumerAssets none(const Scenario& s) {
    std::size_t n = s.nodes.size();
    return {Series(n, 0.0), Series(n, 0.0), Series(n, 0.0)};
  }
  static ProsumerAssets placeholders(const Scenario& s) {
    ProsumerAssets a = none(s);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      a.pv_mw[i] = s.nodes[i].rooftop_pv_placeholder_mw;
      a.battery_mw[i] = s.nodes[i].battery_placeholder_mw;
      a.battery_mwh[i] = s.nodes[i].battery_placeholder_mwh;
    }
    return a;
  }
  bool operator==(const ProsumerAssets&) const = default;
};

struct DayAheadOptions {
  Market market = Market::zonal;
  ProsumerAssets assets;                 // empty vectors: none
  std::vector<Series> fixed_prosumer_net;  // [node][hour], subtracted from load; empty: none
};

struct DayAheadResult {
  Market market = Market::zonal;
  lp::Status status = lp::Status::numerical_failure;
  double objective = 0;
  std::size_t iterations = 0;
  std::size_t hours = 0;

  std::vector<Series> plant_gen;       // [plant][hour] MW
  std::vector<Series> plant_cu;        // [plant][hour] curtailed MW (renewables)
  std::vector<Series> storage_gen;     // [storage][hour]
  std::vector<Series> storage_charge;
  std::vector<Series> storage_soc;
  std::vector<Series> rooftop_gen;     // [node][hour], market-side rooftop PV
  std::vector<Series> rooftop_cu;
  std::vector<Series> home_gen;        // [node][hour], market-side home batteries
  std::vector<Series> home_charge;
  std::vector<Series> home_soc;
  std::vector<Series> lost_load;       // [node][hour]
  std::vector<Series> injection;       // nodal: [node][hour] net export
  std::vector<Series> line_flow;       // nodal: [line][hour]
  struct Exchange {
    std::size_t from = 0, to = 0;  // zone indices
    Series flow;                   // MW from -> to
  };
  std::vector<Exchange> exchanges;     // zonal
  std::vector<Series> net_export;      // zonal: [zone][hour] EX^net
  std::vector<Series> prices;          // [zone or node][hour] EUR/MWh
  ProsumerAssets assets;
  std::vector<Series> fixed_prosumer_net;

  bool optimal() const { return status == lp::Status::optimal; }
};

/// LP of one day-ahead clearing plus the handles needed to read it back.
struct DayAheadModel {
  lp::LpProblem problem{"day_ahead"};
  DayAheadOptions options;
  std::vector<std::vector<lp::VarId>> plant, st_gen, st_ch, st_soc, roof, home_gen, home_ch, home_soc, ll, inj;
  std::vector<std::vector<lp::VarId>> exchange;  // [pair][hour]
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<lp::RowId>> balance;  // [zone or node][hour]
  std::vector<double> renewable_avail_offset;
};

namespace detail {

inline double exchange_limit(const Scenario& s, std::size_t a, std::size_t b) {
  auto it = s.zones[a].exchange_limits.find(s.zones[b].id);
  if (it != s.zones[a].exchange_limits.end()) return it->second;
  auto back = s.zones[b].exchange_limits.find(s.zones[a].id);
  return back != s.zones[b].exchange_limits.end() ? back->second : 0.0;
}

inline bool has_exchange(const Scenario& s, std::size_t a, std::size_t b) {
  return s.zones[a].exchange_limits.count(s.zones[b].id) || s.zones[b].exchange_limits.count(s.zones[a].id);
}

// Adds a cyclic storage block; returns {gen, charge, soc} variables per hour.
struct StorageVars {
  std::vector<lp::VarId> gen, charge, soc;
};

inline StorageVars add_storage(lp::LpProblem& p, const std::string& name, std::size_t hours, double power,
                               double energy, double eta_c, double eta_d, double self_discharge,
                               double gen_cost) {
  StorageVars v;
  for (std::size_t t = 0; t < hours; ++t) {
    std::string h = "[" + name + "," + std::to_string(t) + "]";
    v.gen.push_back(p.add_variable("sgen" + h, 0, power, gen_cost));
    v.charge.push_back(p.add_variable("sch" + h, 0, power, 0));
    v.soc.push_back(p.add_variable("soc" + h, 0, energy, 0));
  }
  for (std::size_t t = 0; t < hours; ++t) {
    std::size_t prev = t == 0 ? hours - 1 : t - 1;
    p.add_row("socbal[" + name + "," + std::to_string(t) + "]",
              {{v.soc[t], 1.0}, {v.soc[prev], -(1.0 - self_discharge)}, {v.charge[t], -eta_c}, {v.gen[t], 1.0 / eta_d}},
              0.0, 0.0);
  }
  return v;
}

}  // namespace detail

/// Builds the day-ahead LP. `net` is required in nodal mode.
inline DayAheadModel build_day_ahead(const Scenario& s, const DayAheadOptions& opt, const DcNetwork* net) {
  DayAheadModel m;
  m.options = opt;
  lp::LpProblem& p = m.problem;
  const std::size_t T = s.hours, N = s.nodes.size(), Z = s.zones.size();
  const bool nodal = opt.market == Market::nodal;
  if (nodal && !net) throw std::invalid_argument("nodal clearing needs a DC network");
  ProsumerAssets assets = opt.assets.pv_mw.empty() ? ProsumerAssets::none(s) : opt.assets;
  m.options.assets = assets;
  const CostBook& c = s.costs;
  double offset = 0;

  // net load per node and hour
  std::vector<Series> load(N, Series(T));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t)
      load[n][t] = s.nodes[n].load[t] - (opt.fixed_prosumer_net.empty() ? 0.0 : opt.fixed_prosumer_net[n][t]);

  // supply terms per node and hour
  std::vector<std::vector<std::vector<lp::Term>>> supply(N, std::vector<std::vector<lp::Term>>(T));

  m.plant.resize(s.plants.size());
  for (std::size_t i = 0; i < s.plants.size(); ++i) {
    const Plant& pl = s.plants[i];
    std::size_t n = s.node_index(pl.node);
    bool renewable = is_variable_renewable(pl.tech);
    for (std::size_t t = 0; t < T; ++t) {
      double avail = pl.available(t);
      double cost = pl.mc(t) - (renewable ? c.c_curt : 0.0);
      if (renewable) offset += c.c_curt * avail;
      auto v = p.add_variable("gen[" + pl.id + "," + std::to_string(t) + "]", 0, avail, cost);
      m.plant[i].push_back(v);
      supply[n][t].push_back({v, 1.0});
    }
  }

  m.st_gen.resize(s.storages.size());
  m.st_ch.resize(s.storages.size());
  m.st_soc.resize(s.storages.size());
  for (std::size_t i = 0; i < s.storages.size(); ++i) {
    const GridStorage& g = s.storages[i];
    std::size_t n = s.node_index(g.node);
    auto v = detail::add_storage(p, g.id, T, g.power, g.energy, g.charge_efficiency, g.discharge_efficiency,
                                 g.self_discharge, g.marginal_cost);
    for (std::size_t t = 0; t < T; ++t) {
      supply[n][t].push_back({v.gen[t], 1.0});
      supply[n][t].push_back({v.charge[t], -1.0});
    }
    m.st_gen[i] = v.gen;
    m.st_ch[i] = v.charge;
    m.st_soc[i] = v.soc;
  }

  m.roof.assign(N, {});
  m.home_gen.assign(N, {});
  m.home_ch.assign(N, {});
  m.home_soc.assign(N, {});
  for (std::size_t n = 0; n < N; ++n) {
    const std::string& id = s.nodes[n].id;
    if (assets.pv_mw[n] > 0) {
      auto it = s.pv_availability.find(id);
      for (std::size_t t = 0; t < T; ++t) {
        double avail = assets.pv_mw[n] * (it != s.pv_availability.end() ? it->second[t] : 0.0);
        offset += c.c_curt * avail;
        auto v = p.add_variable("roof[" + id + "," + std::to_string(t) + "]", 0, avail, c.mc_pv - c.c_curt);
        m.roof[n].push_back(v);
        supply[n][t].push_back({v, 1.0});
      }
    }
    if (assets.battery_mw[n] > 0 && assets.battery_mwh[n] > 0) {
      const HomeBattery& hb = s.home_battery;
      auto v = detail::add_storage(p, "home_" + id, T, assets.battery_mw[n], assets.battery_mwh[n],
                                   hb.charge_efficiency, hb.discharge_efficiency, hb.self_discharge, c.mc_s);
      for (std::size_t t = 0; t < T; ++t) {
        supply[n][t].push_back({v.gen[t], 1.0});
        supply[n][t].push_back({v.charge[t], -1.0});
      }
      m.home_gen[n] = v.gen;
      m.home_ch[n] = v.charge;
      m.home_soc[n] = v.soc;
    }
  }

  m.ll.assign(N, {});
  if (c.voll > 0)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) {
        auto v = p.add_variable("ll[" + s.nodes[n].id + "," + std::to_string(t) + "]", 0, std::max(0.0, load[n][t]),
                                c.voll);
        m.ll[n].push_back(v);
        supply[n][t].push_back({v, 1.0});
      }

  if (nodal) {
    m.inj.assign(N, {});
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t)
        m.inj[n].push_back(p.add_variable("inj[" + s.nodes[n].id + "," + std::to_string(t) + "]", -lp::kInf, lp::kInf));
    m.balance.assign(N, {});
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) {
        auto terms = supply[n][t];
        terms.push_back({m.inj[n][t], -1.0});
        m.balance[n].push_back(
            p.add_row("balance[" + s.nodes[n].id + "," + std::to_string(t) + "]", terms, load[n][t], load[n][t]));
      }
    emit_flow_constraints(p, *net, m.inj);
  } else {
    for (std::size_t a = 0; a < Z; ++a)
      for (std::size_t b = a + 1; b < Z; ++b)
        if (detail::has_exchange(s, a, b)) m.pairs.emplace_back(a, b);
    for (auto [a, b] : m.pairs) {
      double up = detail::exchange_limit(s, a, b), down = detail::exchange_limit(s, b, a);
      std::vector<lp::VarId> flows;
      for (std::size_t t = 0; t < T; ++t)
        flows.push_back(p.add_variable("ex[" + s.zones[a].id + ">" + s.zones[b].id + "," + std::to_string(t) + "]",
                                       std::isinf(down) ? -lp::kInf : -down, up));
      m.exchange.push_back(std::move(flows));
    }
    m.balance.assign(Z, {});
    for (std::size_t z = 0; z < Z; ++z)
      for (std::size_t t = 0; t < T; ++t) {
        std::vector<lp::Term> terms;
        double zload = 0;
        for (std::size_t n = 0; n < N; ++n)
          if (s.nodes[n].zone == s.zones[z].id) {
            terms.insert(terms.end(), supply[n][t].begin(), supply[n][t].end());
            zload += load[n][t];
          }
        for (std::size_t k = 0; k < m.pairs.size(); ++k) {
          if (m.pairs[k].first == z) terms.push_back({m.exchange[k][t], -1.0});
          if (m.pairs[k].second == z) terms.push_back({m.exchange[k][t], 1.0});
        }
        m.balance[z].push_back(
            p.add_row("balance[" + s.zones[z].id + "," + std::to_string(t) + "]", terms, zload, zload));
      }
  }
  p.set_objective_offset(offset);
  return m;
}

namespace detail {

inline std::vector<Series> values(const lp::LpSolution& sol, const std::vector<std::vector<lp::VarId>>& vars,
                                  std::size_t hours) {
  std::vector<Series> out(vars.size(), Series(hours, 0.0));
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t t = 0; t < vars[i].size(); ++t) out[i][t] = sol.value(vars[i][t]);
  return out;
}

}  // namespace detail

/// Reads a solved day-ahead model back into a result.
inline DayAheadResult read_day_ahead(const Scenario& s, const DayAheadModel& m, const lp::LpSolution& sol,
                                     const DcNetwork* net) {
  DayAheadResult r;
  const std::size_t T = s.hours;
  r.market = m.options.market;
  r.status = sol.status;
  r.objective = sol.objective;
  r.iterations = sol.iterations;
  r.hours = T;
  r.assets = m.options.assets;
  r.fixed_prosumer_net = m.options.fixed_prosumer_net;
  if (!sol.optimal()) return r;
  r.plant_gen = detail::values(sol, m.plant, T);
  r.plant_cu.assign(s.plants.size(), Series(T, 0.0));
  for (std::size_t i = 0; i < s.plants.size(); ++i)
    if (is_variable_renewable(s.plants[i].tech))
      for (std::size_t t = 0; t < T; ++t)
        r.plant_cu[i][t] = std::max(0.0, s.plants[i].available(t) - r.plant_gen[i][t]);
  r.storage_gen = detail::values(sol, m.st_gen, T);
  r.storage_charge = detail::values(sol, m.st_ch, T);
  r.storage_soc = detail::values(sol, m.st_soc, T);
  r.rooftop_gen = detail::values(sol, m.roof, T);
  r.rooftop_cu.assign(s.nodes.size(), Series(T, 0.0));
  for (std::size_t n = 0; n < s.nodes.size(); ++n)
    if (!m.roof[n].empty())
      for (std::size_t t = 0; t < T; ++t)
        r.rooftop_cu[n][t] = std::max(0.0, m.problem.variable(m.roof[n][t]).upper - r.rooftop_gen[n][t]);
  r.home_gen = detail::values(sol, m.home_gen, T);
  r.home_charge = detail::values(sol, m.home_ch, T);
  r.home_soc = detail::values(sol, m.home_soc, T);
  r.lost_load = detail::values(sol, m.ll, T);
  r.prices.assign(m.balance.size(), Series(T, 0.0));
  for (std::size_t k = 0; k < m.balance.size(); ++k)
    for (std::size_t t = 0; t < T; ++t) r.prices[k][t] = sol.dual(m.balance[k][t]);
  if (r.market == Market::nodal) {
    r.injection = detail::values(sol, m.inj, T);
    r.line_flow = line_flows(*net, r.injection);
  } else {
    r.net_export.assign(s.zones.size(), Series(T, 0.0));
    for (std::size_t k = 0; k < m.pairs.size(); ++k) {
      DayAheadResult::Exchange ex{m.pairs[k].first, m.pairs[k].second, Series(T)};
      for (std::size_t t = 0; t < T; ++t) {
        ex.flow[t] = sol.value(m.exchange[k][t]);
        r.net_export[ex.from][t] += ex.flow[t];
        r.net_export[ex.to][t] -= ex.flow[t];
      }
      r.exchanges.push_back(std::move(ex));
    }
  }
  return r;
}

/// Clears the day-ahead market. Throws SolveError unless the LP is optimal.
inline DayAheadResult clear_day_ahead(const Scenario& s, const DayAheadOptions& opt, const DcNetwork* net = nullptr,
                                      const lp::SimplexOptions& solver = {}) {
  DcNetwork own;
  if (opt.market == Market::nodal && !net) {
    own = make_network(s);
    net = &own;
  }
  DayAheadModel m = build_day_ahead(s, opt, net);
  lp::LpSolution sol = lp::solve(m.problem, solver);
  if (!sol.optimal())
    throw SolveError(std::string(to_string(opt.market)) + " day-ahead clearing: " + lp::to_string(sol.status),
                     sol.status);
  return read_day_ahead(s, m, sol, net);
}

/// Balance duals, indexed by zone (zonal) or node (nodal).
inline const std::vector<Series>& extract_prices(const DayAheadResult& r, Market market) {
  if (!r.optimal()) throw std::invalid_argument("prices requested from a non-optimal clearing");
  if (r.market != market) throw std::invalid_argument("price market does not match the clearing");
  return r.prices;
}

/// Hourly price seen at node n: its own price (nodal) or its zone's (zonal).
inline const Series& price_at_node(const Scenario& s, const DayAheadResult& r, std::size_t n) {
  return r.market == Market::nodal ? r.prices[n] : r.prices[s.zone_index(s.nodes[n].zone)];
}

/// Market load at the price location of node n: node load or zone load.
inline Series load_at_node(const Scenario& s, Market market, std::size_t n) {
  if (market == Market::nodal) return s.nodes[n].load;
  Series z(s.hours, 0.0);
  for (const auto& node : s.nodes)
    if (node.zone == s.nodes[n].zone)
      for (std::size_t t = 0; t < s.hours; ++t) z[t] += node.load[t];
  return z;
}

/// sum_t p_t d_t / sum_t d_t. Throws on zero total demand or length mismatch.
inline double demand_weighted_average(const Series& prices, const Series& loads) {
  if (prices.size() != loads.size()) throw std::invalid_argument("price and load series differ in length");
  double num = 0, den = 0;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    num += prices[t] * loads[t];
    den += loads[t];
  }
  if (!(den > 0)) throw std::invalid_argument("zero total demand");
  return num / den;
}

}  // namespace prosumgrid
