#pragma once

// Congestion management after the day-ahead market: plant and storage
// schedules move up or down around their day-ahead positions so that nodal
// balances (with the realized prosumer net series) and line limits hold.

#include <cmath>
#include <string>
#include <vector>

#include "prosumgrid/grid_flow.hpp"
#include "prosumgrid/lp/problem.hpp"
#include "prosumgrid/lp/simplex.hpp"
#include "prosumgrid/market.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

struct RedispatchResult {
  lp::Status status = lp::Status::numerical_failure;
  double objective = 0;
  std::size_t iterations = 0;
  std::size_t hours = 0;

  std::vector<Series> plant_up, plant_down, plant_gen, plant_cu;  // [plant][hour]
  std::vector<Series> storage_gen_up, storage_gen_down, storage_charge_up, storage_charge_down;
  std::vector<Series> storage_gen, storage_charge, storage_soc;    // redispatched schedules
  std::vector<Series> lost_load;     // [node][hour]
  std::vector<Series> prosumer_curtailment;  // [node][hour], cut from positive prosumer net
  std::vector<Series> injection;     // [node][hour] net export
  std::vector<Series> line_flow;     // [line][hour]
  std::vector<Series> prosumer_net;  // [node][hour], as given
  std::vector<Series> residual_load; // [node][hour], load without prosumer demand

  double increase_mwh = 0;  // upward plus storage charge reductions
  double decrease_mwh = 0;  // downward, storage charge increases and prosumer curtailment
  std::size_t churn = 0;    // plant-hours with both up and down positive

  bool optimal() const { return status == lp::Status::optimal; }
};

struct RedispatchModel {
  lp::LpProblem problem{"redispatch"};
  std::vector<std::vector<lp::VarId>> up, down, gu, gd, cu, cd, soc, ll, pcut, inj;
  std::vector<std::vector<lp::RowId>> balance;
};

/// Builds the redispatch LP around a day-ahead result.
inline RedispatchModel build_redispatch(const Scenario& s, const DayAheadResult& da,
                                        const std::vector<Series>& prosumer_net, const DcNetwork& net) {
  RedispatchModel m;
  lp::LpProblem& p = m.problem;
  const std::size_t T = s.hours, N = s.nodes.size();
  const CostBook& c = s.costs;
  if (prosumer_net.size() != N) throw std::invalid_argument("prosumer net series must cover every node");
  for (const auto& v : prosumer_net)
    if (v.size() != T) throw std::invalid_argument("prosumer net series horizon differs from scenario");
  if (da.hours != T) throw std::invalid_argument("day-ahead horizon differs from scenario");

  std::vector<Series> rhs(N, Series(T));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t) rhs[n][t] = s.residual_load(n, t) - prosumer_net[n][t];
  std::vector<std::vector<std::vector<lp::Term>>> terms(N, std::vector<std::vector<lp::Term>>(T));
  double offset = 0;

  for (std::size_t i = 0; i < s.plants.size(); ++i) {
    const Plant& pl = s.plants[i];
    std::size_t n = s.node_index(pl.node);
    bool renewable = is_variable_renewable(pl.tech);
    // curtailment change CU_redisp - cu_da equals down - up for renewables
    double cost_up = c.c_redisp - (renewable ? c.c_curt : 0.0);
    double cost_down = c.c_redisp + (renewable ? c.c_curt : 0.0);
    m.up.emplace_back();
    m.down.emplace_back();
    for (std::size_t t = 0; t < T; ++t) {
      double g = da.plant_gen[i][t];
      std::string h = "[" + pl.id + "," + std::to_string(t) + "]";
      auto u = p.add_variable("up" + h, 0, std::max(0.0, pl.available(t) - g), cost_up);
      auto d = p.add_variable("down" + h, 0, std::max(0.0, g), cost_down);
      m.up.back().push_back(u);
      m.down.back().push_back(d);
      terms[n][t].push_back({u, 1});
      terms[n][t].push_back({d, -1});
      rhs[n][t] -= g;
    }
  }

  for (std::size_t i = 0; i < s.storages.size(); ++i) {
    const GridStorage& st = s.storages[i];
    std::size_t n = s.node_index(st.node);
    m.gu.emplace_back();
    m.gd.emplace_back();
    m.cu.emplace_back();
    m.cd.emplace_back();
    m.soc.emplace_back();
    for (std::size_t t = 0; t < T; ++t) {
      double g = da.storage_gen[i][t], ch = da.storage_charge[i][t];
      std::string h = "[" + st.id + "," + std::to_string(t) + "]";
      m.gu.back().push_back(p.add_variable("gen_up" + h, 0, std::max(0.0, st.power - g), c.c_redisp));
      m.gd.back().push_back(p.add_variable("gen_down" + h, 0, std::max(0.0, g), c.c_redisp));
      m.cu.back().push_back(p.add_variable("charge_up" + h, 0, std::max(0.0, st.power - ch), c.c_redisp));
      m.cd.back().push_back(p.add_variable("charge_down" + h, 0, std::max(0.0, ch), c.c_redisp));
      m.soc.back().push_back(p.add_variable("soc" + h, 0, st.energy, 0));
      terms[n][t].push_back({m.gu.back()[t], 1});
      terms[n][t].push_back({m.gd.back()[t], -1});
      terms[n][t].push_back({m.cu.back()[t], -1});
      terms[n][t].push_back({m.cd.back()[t], 1});
      rhs[n][t] -= g - ch;
    }
    for (std::size_t t = 0; t < T; ++t) {
      std::size_t prev = t == 0 ? T - 1 : t - 1;
      double g = da.storage_gen[i][t], ch = da.storage_charge[i][t];
      double eta_c = st.charge_efficiency, eta_d = st.discharge_efficiency;
      double fixed = eta_c * ch - g / eta_d;
      p.add_row("socbal[" + st.id + "," + std::to_string(t) + "]",
                {{m.soc[i][t], 1},
                 {m.soc[i][prev], -(1 - st.self_discharge)},
                 {m.cu[i][t], -eta_c},
                 {m.cd[i][t], eta_c},
                 {m.gu[i][t], 1 / eta_d},
                 {m.gd[i][t], -1 / eta_d}},
                fixed, fixed);
    }
  }

  m.ll.assign(N, {});
  if (c.voll > 0)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t t = 0; t < T; ++t) {
        double served = s.residual_load(n, t) - prosumer_net[n][t];
        auto v = p.add_variable("ll[" + s.nodes[n].id + "," + std::to_string(t) + "]", 0, std::max(0.0, served), c.voll);
        m.ll[n].push_back(v);
        terms[n][t].push_back({v, 1});
        offset -= c.voll * (da.lost_load.empty() || da.lost_load[n].empty() ? 0.0 : da.lost_load[n][t]);
      }

  // prosumer feed-in surplus can be curtailed like a renewable down-adjustment
  m.pcut.assign(N, {});
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t) {
      auto v = p.add_variable("pcut[" + s.nodes[n].id + "," + std::to_string(t) + "]", 0,
                              std::max(0.0, prosumer_net[n][t]), c.c_redisp + c.c_curt);
      m.pcut[n].push_back(v);
      terms[n][t].push_back({v, -1});
    }

  m.inj.assign(N, {});
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t)
      m.inj[n].push_back(p.add_variable("inj[" + s.nodes[n].id + "," + std::to_string(t) + "]", -lp::kInf, lp::kInf));
  m.balance.assign(N, {});
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t) {
      auto row = terms[n][t];
      row.push_back({m.inj[n][t], -1});
      m.balance[n].push_back(
          p.add_row("balance[" + s.nodes[n].id + "," + std::to_string(t) + "]", row, rhs[n][t], rhs[n][t]));
    }
  emit_flow_constraints(p, net, m.inj);
  p.set_objective_offset(offset);
  return m;
}

inline RedispatchResult read_redispatch(const Scenario& s, const DayAheadResult& da,
                                        const std::vector<Series>& prosumer_net, const DcNetwork& net,
                                        const RedispatchModel& m, const lp::LpSolution& sol) {
  RedispatchResult r;
  const std::size_t T = s.hours, N = s.nodes.size();
  r.status = sol.status;
  r.objective = sol.objective;
  r.iterations = sol.iterations;
  r.hours = T;
  r.prosumer_net = prosumer_net;
  r.residual_load.assign(N, Series(T));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t) r.residual_load[n][t] = s.residual_load(n, t);
  if (!sol.optimal()) return r;

  r.plant_up = detail::values(sol, m.up, T);
  r.plant_down = detail::values(sol, m.down, T);
  r.plant_gen.assign(s.plants.size(), Series(T));
  r.plant_cu.assign(s.plants.size(), Series(T, 0.0));
  for (std::size_t i = 0; i < s.plants.size(); ++i)
    for (std::size_t t = 0; t < T; ++t) {
      r.plant_gen[i][t] = da.plant_gen[i][t] + r.plant_up[i][t] - r.plant_down[i][t];
      if (is_variable_renewable(s.plants[i].tech))
        r.plant_cu[i][t] = std::max(0.0, s.plants[i].available(t) - r.plant_gen[i][t]);
      if (r.plant_up[i][t] > 1e-9 && r.plant_down[i][t] > 1e-9) ++r.churn;
      r.increase_mwh += r.plant_up[i][t];
      r.decrease_mwh += r.plant_down[i][t];
    }
  r.storage_gen_up = detail::values(sol, m.gu, T);
  r.storage_gen_down = detail::values(sol, m.gd, T);
  r.storage_charge_up = detail::values(sol, m.cu, T);
  r.storage_charge_down = detail::values(sol, m.cd, T);
  r.storage_soc = detail::values(sol, m.soc, T);
  r.storage_gen.assign(s.storages.size(), Series(T));
  r.storage_charge.assign(s.storages.size(), Series(T));
  for (std::size_t i = 0; i < s.storages.size(); ++i)
    for (std::size_t t = 0; t < T; ++t) {
      r.storage_gen[i][t] = da.storage_gen[i][t] + r.storage_gen_up[i][t] - r.storage_gen_down[i][t];
      r.storage_charge[i][t] = da.storage_charge[i][t] + r.storage_charge_up[i][t] - r.storage_charge_down[i][t];
      r.increase_mwh += r.storage_gen_up[i][t] + r.storage_charge_down[i][t];
      r.decrease_mwh += r.storage_gen_down[i][t] + r.storage_charge_up[i][t];
    }
  r.prosumer_curtailment = detail::values(sol, m.pcut, T);
  for (const auto& v : r.prosumer_curtailment)
    for (double x : v) r.decrease_mwh += x;
  bool has_ll = N && !m.ll[0].empty();
  r.lost_load = has_ll ? detail::values(sol, m.ll, T) : std::vector<Series>(N, Series(T, 0.0));
  r.injection = detail::values(sol, m.inj, T);
  r.line_flow = line_flows(net, r.injection);
  return r;
}

/// Solves the redispatch stage. Throws SolveError unless optimal.
inline RedispatchResult run_redispatch(const Scenario& s, const DayAheadResult& da,
                                       const std::vector<Series>& prosumer_net, const DcNetwork* net = nullptr,
                                       const lp::SimplexOptions& solver = {}) {
  DcNetwork own;
  if (!net) {
    own = make_network(s);
    net = &own;
  }
  RedispatchModel m = build_redispatch(s, da, prosumer_net, *net);
  lp::LpSolution sol = lp::solve(m.problem, solver);
  if (!sol.optimal()) throw SolveError(std::string("redispatch: ") + lp::to_string(sol.status), sol.status);
  return read_redispatch(s, da, prosumer_net, *net, m, sol);
}

struct CongestionReport {
  std::vector<double> utilization;      // per line, mean |flow| / cap
  std::vector<double> max_utilization;  // per line
  std::vector<double> node_up;          // per node, MWh
  std::vector<double> node_down;
};

/// Line utilization and per-node redispatch totals. Uncapped lines report 0.
inline CongestionReport congestion_report(const Scenario& s, const RedispatchResult& r, const DcNetwork& net) {
  CongestionReport rep;
  for (std::size_t l = 0; l < net.lines.size(); ++l) {
    double cap = net.lines[l].capacity, sum = 0, peak = 0;
    const Series& f = r.line_flow[l];
    for (double v : f) {
      double u = std::isinf(cap) ? 0.0 : std::abs(v) / cap;
      sum += u;
      peak = std::max(peak, u);
    }
    rep.utilization.push_back(f.empty() ? 0.0 : sum / static_cast<double>(f.size()));
    rep.max_utilization.push_back(peak);
  }
  rep.node_up.assign(s.nodes.size(), 0.0);
  rep.node_down.assign(s.nodes.size(), 0.0);
  for (std::size_t i = 0; i < s.plants.size(); ++i) {
    std::size_t n = s.node_index(s.plants[i].node);
    for (std::size_t t = 0; t < r.hours; ++t) {
      rep.node_up[n] += r.plant_up[i][t];
      rep.node_down[n] += r.plant_down[i][t];
    }
  }
  for (std::size_t i = 0; i < s.storages.size(); ++i) {
    std::size_t n = s.node_index(s.storages[i].node);
    for (std::size_t t = 0; t < r.hours; ++t) {
      rep.node_up[n] += r.storage_gen_up[i][t] + r.storage_charge_down[i][t];
      rep.node_down[n] += r.storage_gen_down[i][t] + r.storage_charge_up[i][t];
    }
  }
  for (std::size_t n = 0; n < s.nodes.size(); ++n)
    for (double x : r.prosumer_curtailment[n]) rep.node_down[n] += x;
  return rep;
}

}  // namespace prosumgrid
