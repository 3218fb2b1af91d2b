#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "prosumgrid/prosumage.hpp"
#include "prosumgrid/synthetic.hpp"
#include "support/prosumer_grid_search.hpp"

using namespace prosumgrid;

namespace {

ProsumerCluster cluster(Series demand, Series avail, double pv_cap = 1e6) {
  ProsumerCluster c;
  c.node = "H";
  c.household_count = 1;
  c.demand = std::move(demand);
  c.pv_availability = std::move(avail);
  c.pv_cap = pv_cap;
  return c;
}

TariffRegime regime(Pricing p, double t_var = 250, double t_feed = 60) {
  Tariff t;
  t.t_var = t_var;
  t.t_feed = t_feed;
  return TariffRegime::make(Market::zonal, p, t);
}

CostBook free_assets() {
  CostBook c;
  c.c_invest_pv = c.c_fix_pv = c.c_invest_se = c.c_invest_sp = c.c_fix_s = 0;
  return c;
}

double sum(const Series& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

const Scenario& reference() {
  static const Scenario s = synthetic::reference(168);
  return s;
}

}  // namespace

TEST(Prosumage, TwoHourToyBill) {
  // retail 250 + 60 = 310 EUR/MWh; one hour is covered by free PV
  auto c = cluster({1, 1}, {1, 0});
  FixedInvestments pin{1, 0, 0};
  auto d = optimize_prosumers(c, 60.0, regime(Pricing::time_invariant, 250, 0), free_assets(), HomeBattery{}, 8760,
                              &pin);
  EXPECT_NEAR(d.objective, 310, 1e-9);
  EXPECT_NEAR(d.self_use[0], 1, 1e-9);
  EXPECT_NEAR(d.purchase[1], 1, 1e-9);
  EXPECT_NEAR(d.feed_in[0], 0, 1e-9);
}

TEST(Prosumage, ExpensiveAssetsMeanPlainGridSupply) {
  const Scenario& s = reference();
  CostBook costs = s.costs;
  costs.c_invest_pv = costs.c_invest_se = costs.c_invest_sp = 1e9;
  const auto& c = s.clusters[0];
  auto d = optimize_prosumers(c, 70.0, regime(Pricing::time_invariant), costs, s.home_battery, s.hours_per_year);
  EXPECT_NEAR(d.invest_pv, 0, 1e-9);
  EXPECT_NEAR(d.invest_se, 0, 1e-9);
  EXPECT_NEAR(d.invest_sp, 0, 1e-9);
  for (std::size_t t = 0; t < s.hours; ++t) EXPECT_NEAR(d.purchase[t], c.demand[t], 1e-9);
  EXPECT_NEAR(d.objective, sum(c.demand) * 320, 1e-6 * d.objective);
}

TEST(Prosumage, PvInvestmentCappedByRoofArea) {
  auto c = cluster(Series(24, 0.5), Series(24, 0.8), 0.3);
  auto d = optimize_prosumers(c, 200.0, regime(Pricing::time_invariant), free_assets(), HomeBattery{}, 8760);
  EXPECT_NEAR(d.invest_pv, 0.3, 1e-9);
}

TEST(Prosumage, DemandAndPvSplitHoldEveryHour) {
  const Scenario& s = reference();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(10, 140);
  Series prices(s.hours);
  for (auto& p : prices) p = u(rng);
  for (Pricing p : {Pricing::time_invariant, Pricing::real_time}) {
    auto r = regime(p);
    const auto& c = s.clusters[3];
    Series e = energy_component(r, prices, Series(s.hours, 1.0));
    auto d = optimize_prosumers(c, e, r, s.costs, s.home_battery, s.hours_per_year);
    for (std::size_t t = 0; t < s.hours; ++t) {
      EXPECT_GE(d.purchase[t] + d.discharge[t] + d.self_use[t], c.demand[t] - 1e-8);
      EXPECT_NEAR(d.self_use[t] + d.to_battery[t] + d.feed_in[t] + d.curtailment[t], d.pv_available[t], 1e-8);
      EXPECT_LE(d.soc[t], d.invest_se + 1e-8);
      EXPECT_LE(d.to_battery[t], d.invest_sp + 1e-8);
      EXPECT_LE(d.discharge[t], d.invest_sp + 1e-8);
      EXPECT_LE(d.to_battery[t], d.pv_available[t] + 1e-8);
    }
  }
}

TEST(Prosumage, TimeInvariantTariffDischargesImmediately) {
  // With self-discharge and a flat energy price, stored energy is never kept
  // while the household buys from the grid.
  const Scenario& s = reference();
  ASSERT_GT(s.home_battery.self_discharge, 0);
  for (const auto& c : s.clusters) {
    auto d = optimize_prosumers(c, 65.0, regime(Pricing::time_invariant), s.costs, s.home_battery, s.hours_per_year);
    ASSERT_GT(d.invest_se, 1e-6) << c.node;
    for (std::size_t t = 0; t < s.hours; ++t)
      if (d.purchase[t] > 1e-7) {
        EXPECT_TRUE(d.soc[t] <= 1e-7 || d.discharge[t] >= d.invest_sp - 1e-7) << c.node << " hour " << t;
      }
  }
}

TEST(Prosumage, HigherRetailMarkupNeverLowersPvInvestment) {
  const Scenario& s = reference();
  const auto& c = s.clusters[5];
  double last = -1;
  for (double t_var : {100.0, 150.0, 200.0, 250.0, 300.0, 400.0}) {
    auto d = optimize_prosumers(c, 60.0, regime(Pricing::time_invariant, t_var), s.costs, s.home_battery,
                                s.hours_per_year);
    EXPECT_GE(d.invest_pv, last - 1e-7) << t_var;
    last = d.invest_pv;
  }
}

TEST(Prosumage, HigherFeedInTariffNeverLowersFeedIn) {
  const Scenario& s = reference();
  const auto& c = s.clusters[5];
  double last = -1;
  for (double t_feed : {0.0, 30.0, 60.0, 90.0, 150.0}) {
    auto d = optimize_prosumers(c, 60.0, regime(Pricing::time_invariant, 250, t_feed), s.costs, s.home_battery,
                                s.hours_per_year);
    double fed = sum(d.feed_in);
    EXPECT_GE(fed, last - 1e-6) << t_feed;
    last = fed;
  }
}

TEST(Prosumage, PinnedInvestmentsAreKept) {
  const Scenario& s = reference();
  const auto& c = s.clusters[2];
  FixedInvestments pin{0.4 * c.pv_cap, 0.005 * c.household_count, 0.002 * c.household_count};
  auto d = optimize_prosumers(c, 80.0, regime(Pricing::real_time), s.costs, s.home_battery, s.hours_per_year, &pin);
  EXPECT_EQ(d.investments(), pin);
}

TEST(Prosumage, MatchesExhaustiveGridSearch) {
  std::mt19937_64 rng(2024);
  auto grid = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng) * 0.1; };
  HomeBattery lossless{0, 1, 1};
  CostBook costs;
  costs.mc_pv = 1.5;
  costs.mc_s = 2.0;
  for (int run = 0; run < 25; ++run) {
    const std::size_t T = 6;
    Series demand(T), avail(T), prices(T);
    for (std::size_t t = 0; t < T; ++t) {
      demand[t] = grid(0, 8);
      avail[t] = grid(0, 10);
      prices[t] = std::uniform_real_distribution<double>(-20, 150)(rng);
    }
    FixedInvestments pin{1.0, grid(0, 6), grid(0, 3)};
    auto c = cluster(demand, avail);
    auto r = regime(Pricing::real_time, 200, 40);
    auto d = optimize_prosumers(c, prices, r, costs, lossless, 8760, &pin);

    oracle::GridProsumer g;
    g.demand = demand;
    g.pv_available = avail;
    for (std::size_t t = 0; t < T; ++t) {
      g.buy.push_back(r.t_fix + r.t_var + prices[t]);
      g.sell.push_back(r.t_feed + prices[t]);
    }
    g.battery_mwh = pin.battery_mwh;
    g.battery_mw = pin.battery_mw;
    g.cost_charge = costs.mc_pv + costs.mc_s;
    g.cost_discharge = costs.mc_s;
    double years = T / 8760.0;
    g.fixed_cost = years * ((costs.c_invest_pv + costs.c_fix_pv) * pin.pv_mw +
                            (costs.c_invest_se + costs.c_fix_s / 2) * pin.battery_mwh +
                            (costs.c_invest_sp + costs.c_fix_s / 2) * pin.battery_mw);
    auto best = oracle::grid_search(g);
    ASSERT_GT(best.evaluated, T);
    EXPECT_NEAR(d.objective, best.objective, 1e-6) << "run " << run;
  }
}

TEST(Prosumage, EnergyComponentByPricing) {
  Series w = {10, 50};
  Series weights = {1, 3};
  EXPECT_EQ(energy_component(regime(Pricing::real_time), w, weights), w);
  EXPECT_EQ(energy_component(regime(Pricing::time_invariant), w, weights), Series(2, 40.0));
}

TEST(Prosumage, NetSeriesIsFeedInMinusPurchase) {
  ProsumerDecision d;
  d.purchase = {1, 0, 0.5};
  d.feed_in = {0, 2, 0.5};
  EXPECT_EQ(aggregate_net_series(d), (Series{-1, 2, 0}));

  const Scenario& s = reference();
  const auto& c = s.clusters[0];
  auto opt = optimize_prosumers(c, 60.0, regime(Pricing::time_invariant), s.costs, s.home_battery, s.hours_per_year);
  auto all = aggregate_net_series(s, {opt});
  ASSERT_EQ(all.size(), s.nodes.size());
  EXPECT_NEAR(sum(all[s.node_index(c.node)]), sum(opt.feed_in) - sum(opt.purchase), 1e-9);
  EXPECT_EQ(sum(all[1]), 0.0);
}

TEST(Prosumage, InvalidInputsRejected) {
  auto c = cluster(Series(4, 1), Series(4, 0.5));
  auto r = regime(Pricing::real_time);
  EXPECT_THROW(optimize_prosumers(c, Series(3, 50.0), r, CostBook{}, HomeBattery{}, 8760), std::invalid_argument);
  Series bad(4, 50.0);
  bad[2] = std::nan("");
  EXPECT_THROW(optimize_prosumers(c, bad, r, CostBook{}, HomeBattery{}, 8760), std::invalid_argument);
  r.t_var = -1;
  EXPECT_THROW(optimize_prosumers(c, 50.0, r, CostBook{}, HomeBattery{}, 8760), std::invalid_argument);
  auto inconsistent = regime(Pricing::time_invariant);
  inconsistent.binary_zonal = 1;
  EXPECT_THROW(optimize_prosumers(c, 50.0, inconsistent, CostBook{}, HomeBattery{}, 8760), std::invalid_argument);
}
