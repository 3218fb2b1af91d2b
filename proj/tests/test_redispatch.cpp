#include <gtest/gtest.h>

#include <random>

#include "prosumgrid/redispatch.hpp"
#include "prosumgrid/synthetic.hpp"

using namespace prosumgrid;

namespace {

DayAheadResult clear(const Scenario& s, Market m) {
  DayAheadOptions o;
  o.market = m;
  return clear_day_ahead(s, o);
}

// households buy their whole demand: the day-ahead picture is unchanged
std::vector<Series> all_bought(const Scenario& s) {
  std::vector<Series> net(s.nodes.size(), Series(s.hours, 0.0));
  for (const auto& c : s.clusters)
    for (std::size_t t = 0; t < s.hours; ++t) net[s.node_index(c.node)][t] = -c.demand[t];
  return net;
}

double total(const std::vector<Series>& v) {
  double x = 0;
  for (const auto& s : v)
    for (double y : s) x += y;
  return x;
}

}  // namespace

TEST(Redispatch, NothingToDoAfterFeasibleNodalClearing) {
  Scenario s = synthetic::five_node(48, false);
  auto da = clear(s, Market::nodal);
  auto r = run_redispatch(s, da, all_bought(s));
  EXPECT_NEAR(r.objective, 0, 1e-6);
  EXPECT_NEAR(r.increase_mwh, 0, 1e-6);
  EXPECT_NEAR(r.decrease_mwh, 0, 1e-6);
}

TEST(Redispatch, TwoNodeZonalNeedsTwentyUpAndDown) {
  Scenario s = synthetic::two_node(24);
  auto da = clear(s, Market::zonal);
  auto r = run_redispatch(s, da, all_bought(s));
  for (std::size_t t = 0; t < s.hours; ++t) {
    EXPECT_NEAR(r.plant_down[0][t], 20, 1e-9);
    EXPECT_NEAR(r.plant_up[1][t], 20, 1e-9);
    EXPECT_NEAR(r.line_flow[0][t], 30, 1e-9);
  }
  EXPECT_NEAR(r.increase_mwh, 20 * 24, 1e-6);
  EXPECT_NEAR(r.decrease_mwh, 20 * 24, 1e-6);
  EXPECT_NEAR(r.objective, 2 * 20 * 24 * s.costs.c_redisp, 1e-6);
  EXPECT_EQ(r.churn, 0u);
}

TEST(Redispatch, TwoNodeNodalIsAlreadyFeasible) {
  Scenario s = synthetic::two_node(24);
  auto r = run_redispatch(s, clear(s, Market::nodal), all_bought(s));
  EXPECT_NEAR(r.objective, 0, 1e-9);
  EXPECT_NEAR(r.increase_mwh + r.decrease_mwh, 0, 1e-9);
}

TEST(Redispatch, ProsumerSurplusBehindFullLineIsTakenDownLocally) {
  Scenario s = synthetic::two_node(24);
  auto da = clear(s, Market::nodal);
  auto net = all_bought(s);
  for (auto& v : net[0]) v = 10;  // +10 MWh at the exporting node
  auto r = run_redispatch(s, da, net);
  DcNetwork grid = make_network(s);
  auto rep = congestion_report(s, r, grid);
  EXPECT_NEAR(rep.node_down[0], 10 * 24, 1e-6);
  EXPECT_NEAR(rep.node_down[1], 0, 1e-6);
  EXPECT_NEAR(r.increase_mwh, 0, 1e-6);
  EXPECT_NEAR(r.objective, 10 * 24 * s.costs.c_redisp, 1e-6);
}

TEST(Redispatch, ZonalCostsAtLeastNodal) {
  for (const Scenario& s : {synthetic::five_node(48, false), with_horizon(synthetic::reference(168), 48)}) {
    auto net = all_bought(s);
    auto z = run_redispatch(s, clear(s, Market::zonal), net);
    auto n = run_redispatch(s, clear(s, Market::nodal), net);
    EXPECT_GE(z.objective, n.objective - 1e-6) << s.name;
    if (s.name == "reference") {
      EXPECT_GT(z.increase_mwh, 0);
    }
  }
}

TEST(Redispatch, BalancesLimitsAndNoChurnUnderRandomProsumerNet) {
  Scenario s = with_horizon(synthetic::reference(168), 48);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  auto net = all_bought(s);
  for (auto& v : net)
    for (auto& x : v) x += 5 * u(rng);
  for (Market m : {Market::zonal, Market::nodal}) {
    auto da = clear(s, m);
    auto r = run_redispatch(s, da, net);
    EXPECT_EQ(r.churn, 0u);
    for (std::size_t t = 0; t < s.hours; ++t) {
      double sum = 0;
      for (std::size_t n = 0; n < s.nodes.size(); ++n) {
        double supply = r.lost_load[n][t] - r.prosumer_curtailment[n][t];
        for (std::size_t i = 0; i < s.plants.size(); ++i)
          if (s.node_index(s.plants[i].node) == n) supply += r.plant_gen[i][t];
        for (std::size_t i = 0; i < s.storages.size(); ++i)
          if (s.node_index(s.storages[i].node) == n) supply += r.storage_gen[i][t] - r.storage_charge[i][t];
        EXPECT_NEAR(supply - r.injection[n][t], s.residual_load(n, t) - net[n][t], 1e-6);
        sum += r.injection[n][t];
      }
      EXPECT_NEAR(sum, 0, 1e-6);
    }
    for (std::size_t l = 0; l < s.lines.size(); ++l)
      for (double f : r.line_flow[l]) EXPECT_LE(std::abs(f), s.lines[l].capacity + 1e-6);
    for (std::size_t i = 0; i < s.plants.size(); ++i)
      for (std::size_t t = 0; t < s.hours; ++t) {
        EXPECT_GE(r.plant_gen[i][t], -1e-9);
        EXPECT_LE(r.plant_gen[i][t], s.plants[i].available(t) + 1e-9);
      }
    const GridStorage& g = s.storages[0];
    for (std::size_t t = 0; t < s.hours; ++t) {
      std::size_t prev = t == 0 ? s.hours - 1 : t - 1;
      EXPECT_NEAR(r.storage_soc[0][t],
                  (1 - g.self_discharge) * r.storage_soc[0][prev] + g.charge_efficiency * r.storage_charge[0][t] -
                      r.storage_gen[0][t] / g.discharge_efficiency,
                  1e-6);
    }
  }
}

TEST(Redispatch, TotalsAddUpFromTheParts) {
  Scenario s = synthetic::five_node(48, false);
  auto r = run_redispatch(s, clear(s, Market::zonal), all_bought(s));
  double up = total(r.plant_up) + total(r.storage_gen_up) + total(r.storage_charge_down);
  double down = total(r.plant_down) + total(r.storage_gen_down) + total(r.storage_charge_up) +
                total(r.prosumer_curtailment);
  EXPECT_NEAR(r.increase_mwh, up, 1e-9);
  EXPECT_NEAR(r.decrease_mwh, down, 1e-9);
  auto rep = congestion_report(s, r, make_network(s));
  double node_up = 0, node_down = 0;
  for (std::size_t n = 0; n < s.nodes.size(); ++n) {
    node_up += rep.node_up[n];
    node_down += rep.node_down[n];
  }
  EXPECT_NEAR(node_up, up, 1e-9);
  EXPECT_NEAR(node_down, down, 1e-9);
}

TEST(Redispatch, UtilizationOfFullAndIdleLines) {
  Scenario s = synthetic::two_node(24);
  auto r = run_redispatch(s, clear(s, Market::zonal), all_bought(s));
  auto rep = congestion_report(s, r, make_network(s));
  EXPECT_NEAR(rep.utilization[0], 1.0, 1e-9);
  EXPECT_NEAR(rep.max_utilization[0], 1.0, 1e-9);

  for (auto& v : s.nodes[1].load) v = 0;
  auto idle = run_redispatch(s, clear(s, Market::zonal), all_bought(s));
  auto rep0 = congestion_report(s, idle, make_network(s));
  EXPECT_EQ(rep0.utilization[0], 0.0);
  EXPECT_EQ(rep0.max_utilization[0], 0.0);
}

TEST(Redispatch, UncappedLinesReportZeroUtilization) {
  Scenario s = synthetic::five_node(24, true);
  auto r = run_redispatch(s, clear(s, Market::zonal), all_bought(s));
  auto rep = congestion_report(s, r, make_network(s));
  for (double u : rep.utilization) EXPECT_EQ(u, 0.0);
}

TEST(Redispatch, UnresolvableCongestionIsInfeasible) {
  Scenario s = synthetic::two_node(6);
  s.plants[1].capacity = 10;
  s.costs.voll = 0;
  auto da = clear(s, Market::zonal);
  try {
    run_redispatch(s, da, all_bought(s));
    FAIL() << "expected SolveError";
  } catch (const SolveError& e) {
    EXPECT_EQ(e.status(), lp::Status::infeasible);
  }
}

TEST(Redispatch, LostLoadCoversUnservableDemand) {
  Scenario s = synthetic::two_node(6);
  s.plants[1].capacity = 10;
  auto r = run_redispatch(s, clear(s, Market::zonal), all_bought(s));
  for (std::size_t t = 0; t < s.hours; ++t) EXPECT_NEAR(r.lost_load[1][t], 10, 1e-9);
}

TEST(Redispatch, InputShapesChecked) {
  Scenario s = synthetic::two_node(6);
  auto da = clear(s, Market::zonal);
  EXPECT_THROW(run_redispatch(s, da, {Series(6, 0.0)}), std::invalid_argument);
  EXPECT_THROW(run_redispatch(s, da, {Series(6, 0.0), Series(5, 0.0)}), std::invalid_argument);
}
