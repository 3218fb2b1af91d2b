#pragma once

// CSV reports for a regime matrix run. Every summary value can be recomputed
// from the detailed files (dispatch.csv, prosumer_net.csv, loads.csv, prices.csv).

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "prosumgrid/csv.hpp"
#include "prosumgrid/grid_flow.hpp"
#include "prosumgrid/pipeline.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

/// Rows of the generation-by-type table, in output order.
inline const std::vector<std::string>& generation_categories() {
  static const std::vector<std::string> rows = {"other_res",     "conventional",  "solar_rooftop",
                                                "solar_park",    "solar_battery", "wind_onshore",
                                                "wind_offshore", "hydro_ror",     "hydro_psp"};
  return rows;
}

inline const char* generation_category(Tech t) {
  switch (t) {
    case Tech::biomass: return "other_res";
    case Tech::hard_coal:
    case Tech::lignite:
    case Tech::gas:
    case Tech::other_conventional: return "conventional";
    case Tech::pv_ground: return "solar_park";
    case Tech::wind_onshore: return "wind_onshore";
    case Tech::wind_offshore: return "wind_offshore";
    case Tech::hydro: return "hydro_ror";
  }
  return "conventional";
}

/// Post-redispatch generation per category (MWh over the horizon). Rooftop
/// and home-battery output come from the prosumer dispatch.
inline std::map<std::string, double> generation_by_type(const Scenario& s, const ScenarioResult& r) {
  std::map<std::string, double> g;
  for (const auto& c : generation_categories()) g[c] = 0;
  for (std::size_t i = 0; i < s.plants.size(); ++i)
    for (double v : r.redispatch.plant_gen[i]) g[generation_category(s.plants[i].tech)] += v;
  for (const auto& series : r.redispatch.storage_gen)
    for (double v : series) g["hydro_psp"] += v;
  for (const auto& d : r.step4)
    for (std::size_t t = 0; t < d.self_use.size(); ++t) {
      g["solar_rooftop"] += d.self_use[t] + d.to_battery[t] + d.feed_in[t];
      g["solar_battery"] += d.discharge[t];
    }
  return g;
}

struct ProsumerTotals {
  double households = 0, pv_mw = 0, battery_mwh = 0, battery_mw = 0;
  double self_use = 0, stored = 0, discharged = 0, bought = 0, sold = 0, curtailed = 0, bill = 0;
};

inline ProsumerTotals prosumer_totals(const Scenario& s, const std::vector<ProsumerDecision>& ds) {
  ProsumerTotals o;
  for (const auto& d : ds) {
    o.households += s.nodes[s.node_index(d.node)].household_count;
    o.pv_mw += d.invest_pv;
    o.battery_mwh += d.invest_se;
    o.battery_mw += d.invest_sp;
    o.bill += d.objective;
    for (std::size_t t = 0; t < d.purchase.size(); ++t) {
      o.self_use += d.self_use[t];
      o.stored += d.to_battery[t];
      o.discharged += d.discharge[t];
      o.bought += d.purchase[t];
      o.sold += d.feed_in[t];
      o.curtailed += d.curtailment[t];
    }
  }
  return o;
}

namespace detail {

inline std::string hour(std::size_t t) { return std::to_string(t); }

inline void write_prices(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  csv::Writer w(dir / "prices.csv");
  w.row("stage", "market", "location", "hour", "price_eur_per_mwh");
  auto put = [&](const char* stage, const DayAheadResult& da) {
    for (std::size_t k = 0; k < da.prices.size(); ++k) {
      const std::string& loc = da.market == Market::nodal ? s.nodes[k].id : s.zones[k].id;
      for (std::size_t t = 0; t < s.hours; ++t) w.row(stage, to_string(da.market), loc, hour(t), da.prices[k][t]);
    }
  };
  put("step1", r.step1);
  put("step3", r.step3);
  w.close();
}

inline void write_loads(const Scenario& s, const std::filesystem::path& dir) {
  csv::Writer w(dir / "loads.csv");
  w.row("node", "zone", "hour", "load_mwh", "prosumer_demand_mwh");
  for (const auto& n : s.nodes) {
    const auto* c = s.cluster_at(n.id);
    for (std::size_t t = 0; t < s.hours; ++t) w.row(n.id, n.zone, hour(t), n.load[t], c ? c->demand[t] : 0.0);
  }
  w.close();
}

inline void write_investments(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  csv::Writer w(dir / "investments.csv");
  w.row("node", "households", "pv_cap_mw", "pv_mw", "battery_mwh", "battery_mw", "pv_kw_per_household",
        "battery_kwh_per_household", "battery_kw_per_household", "market_pv_mw", "market_battery_mwh",
        "market_battery_mw");
  for (const auto& d : r.step2) {
    std::size_t n = s.node_index(d.node);
    const auto* c = s.cluster_at(d.node);
    double hh = s.nodes[n].household_count;
    w.row(d.node, s.nodes[n].household_count, c ? c->pv_cap : 0.0, d.invest_pv, d.invest_se, d.invest_sp,
          d.invest_pv * 1000 / hh, d.invest_se * 1000 / hh, d.invest_sp * 1000 / hh, r.step3_assets.pv_mw[n],
          r.step3_assets.battery_mwh[n], r.step3_assets.battery_mw[n]);
  }
  w.close();
}

inline void write_dispatch(const Scenario& s, const ScenarioResult& r, const DcNetwork& net,
                           const std::filesystem::path& dir) {
  csv::Writer w(dir / "dispatch.csv");
  w.row("stage", "kind", "id", "location", "hour", "mw");
  auto block = [&](const char* stage, const char* kind, const std::string& id, const std::string& loc,
                   const Series& v) {
    for (std::size_t t = 0; t < v.size(); ++t) w.row(stage, kind, id, loc, hour(t), v[t]);
  };
  auto line_loc = [&](std::size_t l) { return net.nodes[net.lines[l].from] + ">" + net.nodes[net.lines[l].to]; };

  const DayAheadResult& da = r.step3;
  for (std::size_t i = 0; i < s.plants.size(); ++i) {
    block("step3", "plant", s.plants[i].id, s.plants[i].node, da.plant_gen[i]);
    if (is_variable_renewable(s.plants[i].tech))
      block("step3", "curtailment", s.plants[i].id, s.plants[i].node, da.plant_cu[i]);
  }
  for (std::size_t i = 0; i < s.storages.size(); ++i) {
    block("step3", "storage_gen", s.storages[i].id, s.storages[i].node, da.storage_gen[i]);
    block("step3", "storage_charge", s.storages[i].id, s.storages[i].node, da.storage_charge[i]);
    block("step3", "storage_soc", s.storages[i].id, s.storages[i].node, da.storage_soc[i]);
  }
  for (std::size_t n = 0; n < s.nodes.size(); ++n) {
    const std::string& id = s.nodes[n].id;
    if (!da.rooftop_gen[n].empty() && r.step3_assets.pv_mw[n] > 0) {
      block("step3", "rooftop", id, id, da.rooftop_gen[n]);
      block("step3", "rooftop_curtailment", id, id, da.rooftop_cu[n]);
    }
    if (r.step3_assets.battery_mw[n] > 0 && r.step3_assets.battery_mwh[n] > 0) {
      block("step3", "home_gen", id, id, da.home_gen[n]);
      block("step3", "home_charge", id, id, da.home_charge[n]);
      block("step3", "home_soc", id, id, da.home_soc[n]);
    }
    block("step3", "lost_load", id, id, da.lost_load[n]);
  }
  if (da.market == Market::nodal) {
    for (std::size_t n = 0; n < s.nodes.size(); ++n) block("step3", "injection", s.nodes[n].id, s.nodes[n].id, da.injection[n]);
    for (std::size_t l = 0; l < net.lines.size(); ++l) block("step3", "flow", net.lines[l].id, line_loc(l), da.line_flow[l]);
  } else {
    for (std::size_t z = 0; z < s.zones.size(); ++z) block("step3", "net_export", s.zones[z].id, s.zones[z].id, da.net_export[z]);
    for (const auto& ex : da.exchanges)
      block("step3", "exchange", s.zones[ex.from].id + ">" + s.zones[ex.to].id, s.zones[ex.from].id, ex.flow);
  }

  const RedispatchResult& rd = r.redispatch;
  for (std::size_t i = 0; i < s.plants.size(); ++i) {
    const Plant& p = s.plants[i];
    block("redispatch", "plant", p.id, p.node, rd.plant_gen[i]);
    block("redispatch", "up", p.id, p.node, rd.plant_up[i]);
    block("redispatch", "down", p.id, p.node, rd.plant_down[i]);
    if (is_variable_renewable(p.tech)) block("redispatch", "curtailment", p.id, p.node, rd.plant_cu[i]);
  }
  for (std::size_t i = 0; i < s.storages.size(); ++i) {
    const GridStorage& g = s.storages[i];
    block("redispatch", "storage_gen", g.id, g.node, rd.storage_gen[i]);
    block("redispatch", "storage_charge", g.id, g.node, rd.storage_charge[i]);
    block("redispatch", "storage_soc", g.id, g.node, rd.storage_soc[i]);
    block("redispatch", "gen_up", g.id, g.node, rd.storage_gen_up[i]);
    block("redispatch", "gen_down", g.id, g.node, rd.storage_gen_down[i]);
    block("redispatch", "charge_up", g.id, g.node, rd.storage_charge_up[i]);
    block("redispatch", "charge_down", g.id, g.node, rd.storage_charge_down[i]);
  }
  for (std::size_t n = 0; n < s.nodes.size(); ++n) {
    block("redispatch", "lost_load", s.nodes[n].id, s.nodes[n].id, rd.lost_load[n]);
    block("redispatch", "prosumer_curtailment", s.nodes[n].id, s.nodes[n].id, rd.prosumer_curtailment[n]);
    block("redispatch", "injection", s.nodes[n].id, s.nodes[n].id, rd.injection[n]);
  }
  for (std::size_t l = 0; l < net.lines.size(); ++l) block("redispatch", "flow", net.lines[l].id, line_loc(l), rd.line_flow[l]);
  w.close();
}

inline void write_prosumer_net(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  csv::Writer w(dir / "prosumer_net.csv");
  w.row("node", "hour", "demand_mwh", "pv_available_mwh", "purchase_mwh", "self_use_mwh", "to_battery_mwh",
        "feed_in_mwh", "curtailment_mwh", "discharge_mwh", "soc_mwh", "net_mwh");
  for (const auto& d : r.step4)
    for (std::size_t t = 0; t < s.hours; ++t)
      w.row(d.node, hour(t), d.demand[t], d.pv_available[t], d.purchase[t], d.self_use[t], d.to_battery[t],
            d.feed_in[t], d.curtailment[t], d.discharge[t], d.soc[t], d.feed_in[t] - d.purchase[t]);
  w.close();
}

inline void write_prosumer_summary(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  csv::Writer w(dir / "prosumer_summary.csv");
  w.row("node", "self_use_mwh", "stored_mwh", "discharged_mwh", "bought_mwh", "sold_mwh", "curtailed_mwh",
        "bill_eur");
  for (const auto& d : r.step4) {
    auto t = prosumer_totals(s, {d});
    w.row(d.node, t.self_use, t.stored, t.discharged, t.bought, t.sold, t.curtailed, t.bill);
  }
  auto t = prosumer_totals(s, r.step4);
  w.row("total", t.self_use, t.stored, t.discharged, t.bought, t.sold, t.curtailed, t.bill);
  w.close();
}

inline void write_generation(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  csv::Writer w(dir / "generation_by_type.csv");
  w.row("plant_type", "generation_mwh", "generation_twh");
  auto g = generation_by_type(s, r);
  for (const auto& c : generation_categories()) w.row(c, g[c], g[c] / 1e6);
  w.close();
}

inline void write_redispatch(const Scenario& s, const ScenarioResult& r, const DcNetwork& net,
                             const std::filesystem::path& dir) {
  const RedispatchResult& rd = r.redispatch;
  {
    csv::Writer w(dir / "redispatch_totals.csv");
    w.row("measure", "mwh", "twh");
    w.row("increase", rd.increase_mwh, rd.increase_mwh / 1e6);
    w.row("decrease", rd.decrease_mwh, rd.decrease_mwh / 1e6);
    w.close();
  }
  {
    csv::Writer w(dir / "redispatch_nodes.csv");
    w.row("node", "up_mwh", "down_mwh");
    for (std::size_t n = 0; n < s.nodes.size(); ++n)
      w.row(s.nodes[n].id, r.congestion.node_up[n], r.congestion.node_down[n]);
    w.close();
  }
  csv::Writer w(dir / "line_utilization.csv");
  w.row("line", "from", "to", "capacity_mw", "mean_utilization", "max_utilization");
  for (std::size_t l = 0; l < net.lines.size(); ++l)
    w.row(net.lines[l].id, net.nodes[net.lines[l].from], net.nodes[net.lines[l].to], net.lines[l].capacity,
          r.congestion.utilization[l], r.congestion.max_utilization[l]);
  w.close();
}

}  // namespace detail

/// Files written per regime directory.
inline const std::vector<std::string>& regime_files() {
  static const std::vector<std::string> files = {
      "prices.csv",        "investments.csv",       "dispatch.csv",         "prosumer_net.csv",
      "generation_by_type.csv", "redispatch_totals.csv", "line_utilization.csv", "loads.csv",
      "redispatch_nodes.csv",   "prosumer_summary.csv"};
  return files;
}

inline void write_regime(const Scenario& s, const ScenarioResult& r, const DcNetwork& net,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_prices(s, r, dir);
  detail::write_loads(s, dir);
  detail::write_investments(s, r, dir);
  detail::write_dispatch(s, r, net, dir);
  detail::write_prosumer_net(s, r, dir);
  detail::write_prosumer_summary(s, r, dir);
  detail::write_generation(s, r, dir);
  detail::write_redispatch(s, r, net, dir);
}

/// One row per measure, one column per regime in run order.
inline void write_comparison(const Scenario& s, const std::vector<ScenarioResult>& results,
                             const std::filesystem::path& path) {
  std::vector<std::string> header = {"measure"};
  for (const auto& r : results) header.push_back(r.regime.name());
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  auto add = [&](const std::string& name, auto f) {
    std::vector<double> v;
    for (const auto& r : results) v.push_back(f(r));
    rows.emplace_back(name, std::move(v));
  };
  add("step1_avg_price_eur_per_mwh", [&](const ScenarioResult& r) { return system_average_price(s, r.step1); });
  add("step3_avg_price_eur_per_mwh", [&](const ScenarioResult& r) { return system_average_price(s, r.step3); });
  add("households", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step2).households; });
  add("pv_mw", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step2).pv_mw; });
  add("battery_mwh", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step2).battery_mwh; });
  add("battery_mw", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step2).battery_mw; });
  add("pv_kw_per_household", [&](const ScenarioResult& r) {
    auto t = prosumer_totals(s, r.step2);
    return t.households > 0 ? t.pv_mw * 1000 / t.households : 0.0;
  });
  add("battery_kwh_per_household", [&](const ScenarioResult& r) {
    auto t = prosumer_totals(s, r.step2);
    return t.households > 0 ? t.battery_mwh * 1000 / t.households : 0.0;
  });
  add("self_use_mwh", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step4).self_use; });
  add("stored_mwh", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step4).stored; });
  add("bought_mwh", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step4).bought; });
  add("sold_mwh", [&](const ScenarioResult& r) { return prosumer_totals(s, r.step4).sold; });
  add("redispatch_increase_mwh", [](const ScenarioResult& r) { return r.redispatch.increase_mwh; });
  add("redispatch_decrease_mwh", [](const ScenarioResult& r) { return r.redispatch.decrease_mwh; });
  for (const auto& c : generation_categories())
    add("generation_" + c + "_twh", [&](const ScenarioResult& r) { return generation_by_type(s, r)[c] / 1e6; });

  csv::Writer w(path);
  w.row(header);
  for (const auto& [name, v] : rows) {
    std::vector<std::string> cells = {name};
    for (double x : v) cells.push_back(csv::num(x));
    w.row(cells);
  }
  w.close();
}

/// Writes a study into `out`: regime subdirectories plus comparison.csv.
/// Output is staged in a sibling directory and moved into place at the end,
/// so a failed write leaves no partial results behind.
inline void write_study(const Scenario& s, const std::vector<ScenarioResult>& results,
                        const std::filesystem::path& out) {
  namespace fs = std::filesystem;
  DcNetwork net = make_network(s);
  fs::path staging = out;
  staging += ".partial";
  fs::remove_all(staging);
  try {
    fs::create_directories(staging);
    for (const auto& r : results) write_regime(s, r, net, staging / r.regime.name());
    write_comparison(s, results, staging / "comparison.csv");
    if (fs::exists(out)) {
      bool previous = fs::exists(out / "comparison.csv") || fs::is_empty(out);
      if (!previous) throw std::runtime_error(out.string() + ": exists and is not a study output directory");
      fs::remove_all(out);
    }
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    fs::rename(staging, out);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace prosumgrid
