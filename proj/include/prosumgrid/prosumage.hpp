#pragma once

// Household prosumage: PV and home-battery investment plus hourly dispatch
// minimizing the cluster's electricity bill. The battery is charged only
// from rooftop PV (the PV-to-battery flow is the charging flow).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "prosumgrid/lp/problem.hpp"
#include "prosumgrid/lp/simplex.hpp"
#include "prosumgrid/market.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

struct FixedInvestments {
  double pv_mw = 0;
  double battery_mwh = 0;
  double battery_mw = 0;
  bool operator==(const FixedInvestments&) const = default;
};

struct ProsumerDecision {
  std::string node;
  lp::Status status = lp::Status::numerical_failure;
  double objective = 0;  // EUR over the horizon
  double invest_pv = 0;  // MW
  double invest_se = 0;  // MWh
  double invest_sp = 0;  // MW
  Series demand;
  Series pv_available;   // MWh per hour at the invested capacity
  Series purchase;       // F
  Series self_use;       // PV used directly
  Series to_battery;     // PV into the battery (= battery charge)
  Series feed_in;        // PV to the grid
  Series curtailment;
  Series discharge;
  Series soc;
  Series energy_price;   // energy component of the tariff used, EUR/MWh

  bool optimal() const { return status == lp::Status::optimal; }
  FixedInvestments investments() const { return {invest_pv, invest_se, invest_sp}; }
};

struct ProsumerModel {
  lp::LpProblem problem{"prosumage"};
  lp::VarId pv, se, sp;
  std::vector<lp::VarId> f, self, bat, grid, curt, dis, soc;
  std::vector<lp::RowId> demand_rows;
};

/// Energy component of the retail tariff per hour: the wholesale series
/// under real-time pricing, else its demand-weighted average.
inline Series energy_component(const TariffRegime& regime, const Series& wholesale, const Series& weights) {
  if (regime.pricing == Pricing::real_time) return wholesale;
  return Series(wholesale.size(), demand_weighted_average(wholesale, weights));
}

inline ProsumerModel build_prosumer_lp(const ProsumerCluster& c, const Series& energy_price, const TariffRegime& regime,
                                       const CostBook& costs, const HomeBattery& hb, double hours_per_year,
                                       const FixedInvestments* fixed = nullptr) {
  regime.validate();
  const std::size_t T = c.demand.size();
  if (energy_price.size() < T)
    throw std::invalid_argument("price series shorter than horizon (" + std::to_string(energy_price.size()) + " < " +
                                std::to_string(T) + ")");
  if (c.pv_availability.size() < T) throw std::invalid_argument("PV availability shorter than horizon");
  ProsumerModel m;
  lp::LpProblem& p = m.problem;
  const double years = static_cast<double>(T) / hours_per_year;

  double pv_cost = (costs.c_invest_pv + costs.c_fix_pv) * years;
  double se_cost = (costs.c_invest_se + costs.c_fix_s / 2) * years;
  double sp_cost = (costs.c_invest_sp + costs.c_fix_s / 2) * years;
  if (fixed) {
    m.pv = p.add_variable("invest_pv", fixed->pv_mw, fixed->pv_mw, pv_cost);
    m.se = p.add_variable("invest_se", fixed->battery_mwh, fixed->battery_mwh, se_cost);
    m.sp = p.add_variable("invest_sp", fixed->battery_mw, fixed->battery_mw, sp_cost);
  } else {
    m.pv = p.add_variable("invest_pv", 0, c.pv_cap, pv_cost);
    m.se = p.add_variable("invest_se", 0, lp::kInf, se_cost);
    m.sp = p.add_variable("invest_sp", 0, lp::kInf, sp_cost);
  }

  for (std::size_t t = 0; t < T; ++t) {
    std::string h = "[" + std::to_string(t) + "]";
    double buy = regime.t_fix + regime.t_var + energy_price[t];
    double sell = regime.t_feed + energy_price[t];
    m.f.push_back(p.add_variable("F" + h, 0, lp::kInf, buy));
    m.self.push_back(p.add_variable("pv_self" + h, 0, lp::kInf, 0));
    m.bat.push_back(p.add_variable("pv_bat" + h, 0, lp::kInf, costs.mc_pv + costs.mc_s));
    m.grid.push_back(p.add_variable("pv_grid" + h, 0, lp::kInf, -sell));
    m.curt.push_back(p.add_variable("pv_curt" + h, 0, lp::kInf, 0));
    m.dis.push_back(p.add_variable("bat_out" + h, 0, lp::kInf, costs.mc_s));
    m.soc.push_back(p.add_variable("soc" + h, 0, lp::kInf, 0));
  }
  for (std::size_t t = 0; t < T; ++t) {
    std::string h = "[" + std::to_string(t) + "]";
    std::size_t prev = t == 0 ? T - 1 : t - 1;
    m.demand_rows.push_back(
        p.add_row("demand" + h, {{m.f[t], 1}, {m.dis[t], 1}, {m.self[t], 1}}, c.demand[t], lp::kInf));
    p.add_row("pv_split" + h,
              {{m.self[t], 1}, {m.bat[t], 1}, {m.grid[t], 1}, {m.curt[t], 1}, {m.pv, -c.pv_availability[t]}}, 0, 0);
    p.add_row("soc_balance" + h,
              {{m.soc[t], 1},
               {m.soc[prev], -(1 - hb.self_discharge)},
               {m.bat[t], -hb.charge_efficiency},
               {m.dis[t], 1 / hb.discharge_efficiency}},
              0, 0);
    p.add_row("soc_cap" + h, {{m.soc[t], 1}, {m.se, -1}}, -lp::kInf, 0);
    p.add_row("charge_cap" + h, {{m.bat[t], 1}, {m.sp, -1}}, -lp::kInf, 0);
    p.add_row("discharge_cap" + h, {{m.dis[t], 1}, {m.sp, -1}}, -lp::kInf, 0);
  }
  return m;
}

inline ProsumerDecision read_prosumer(const ProsumerCluster& c, const ProsumerModel& m, const lp::LpSolution& sol,
                                      const Series& energy_price) {
  ProsumerDecision d;
  d.node = c.node;
  d.status = sol.status;
  d.objective = sol.objective;
  d.energy_price = energy_price;
  d.demand = c.demand;
  if (!sol.optimal()) return d;
  d.invest_pv = sol.value(m.pv);
  d.invest_se = sol.value(m.se);
  d.invest_sp = sol.value(m.sp);
  auto read = [&](const std::vector<lp::VarId>& v) {
    Series out(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) out[t] = std::max(0.0, sol.value(v[t]));
    return out;
  };
  d.purchase = read(m.f);
  d.self_use = read(m.self);
  d.to_battery = read(m.bat);
  d.feed_in = read(m.grid);
  d.curtailment = read(m.curt);
  d.discharge = read(m.dis);
  d.soc = read(m.soc);
  d.pv_available.resize(c.demand.size());
  for (std::size_t t = 0; t < c.demand.size(); ++t) d.pv_available[t] = c.pv_availability[t] * d.invest_pv;
  return d;
}

/// Solves the cluster's bill minimization against an hourly energy component
/// (see energy_component). With `fixed`, investments are pinned and only the
/// dispatch is optimized. Throws SolveError unless optimal.
inline ProsumerDecision optimize_prosumers(const ProsumerCluster& c, const Series& energy_price,
                                           const TariffRegime& regime, const CostBook& costs, const HomeBattery& hb,
                                           double hours_per_year, const FixedInvestments* fixed = nullptr,
                                           const lp::SimplexOptions& solver = {}) {
  for (double e : energy_price)
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite price");
  ProsumerModel m = build_prosumer_lp(c, energy_price, regime, costs, hb, hours_per_year, fixed);
  lp::LpSolution sol = lp::solve(m.problem, solver);
  if (!sol.optimal()) throw SolveError("prosumage at node '" + c.node + "': " + lp::to_string(sol.status), sol.status);
  return read_prosumer(c, m, sol, energy_price);
}

/// Scalar-price overload: a constant energy component over the horizon.
inline ProsumerDecision optimize_prosumers(const ProsumerCluster& c, double energy_price, const TariffRegime& regime,
                                           const CostBook& costs, const HomeBattery& hb, double hours_per_year,
                                           const FixedInvestments* fixed = nullptr) {
  return optimize_prosumers(c, Series(c.demand.size(), energy_price), regime, costs, hb, hours_per_year, fixed);
}

/// Net grid feed-in per hour: feed-in minus purchase (MWh, may be negative).
inline Series aggregate_net_series(const ProsumerDecision& d) {
  Series net(d.purchase.size());
  for (std::size_t t = 0; t < net.size(); ++t) net[t] = d.feed_in[t] - d.purchase[t];
  return net;
}

/// Net series for every node of the scenario (zero where no cluster).
inline std::vector<Series> aggregate_net_series(const Scenario& s, const std::vector<ProsumerDecision>& decisions) {
  std::vector<Series> out(s.nodes.size(), Series(s.hours, 0.0));
  for (const auto& d : decisions) out[s.node_index(d.node)] = aggregate_net_series(d);
  return out;
}

}  // namespace prosumgrid
