// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "prosumgrid/prosumgrid.hpp"
#include "support/btheta_oracle.hpp"
#include "support/csv_verifier.hpp"
#include "support/prosumer_grid_search.hpp"
#include "support/random_lp.hpp"
#include "support/tmpdir.hpp"

using namespace prosumgrid;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  failures += !o.pass;
  std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

Outcome lp_kernel() {
  auto t0 = Clock::now();
  double worst_obj = 0, worst_gap = 0;
  int optimal = 0, infeasible = 0, mismatched = 0;
  for (std::uint32_t seed = 1; seed <= 200; ++seed) {
    auto lp = testsupport::make_random_lp(seed);
    auto ref = oracle::enumerate_vertices(lp.dense);
    auto sol = lp::solve(lp.problem);
    if (!ref.feasible) {
      if (sol.status == lp::Status::infeasible) ++infeasible;
      else ++mismatched;
      continue;
    }
    if (!sol.optimal()) {
      ++mismatched;
      continue;
    }
    ++optimal;
    worst_obj = std::max(worst_obj, std::abs(sol.objective - ref.objective) / (1.0 + std::abs(ref.objective)));
    double dual = lp::dual_objective(lp.problem, sol.duals, sol.reduced_costs);
    worst_gap = std::max(worst_gap, std::abs(sol.objective - dual) / (1.0 + std::abs(sol.objective)));
  }
  double secs = seconds_since(t0);
  bool ok = mismatched == 0 && worst_obj <= 1e-6 && worst_gap <= 1e-6 && secs < 10;
  return {ok, fmt("%d optimal, %d infeasible, %d status mismatches; max rel objective error %.2e, max duality gap "
                  "%.2e (tol 1e-6); %.2f s (limit 10 s)",
                  optimal, infeasible, mismatched, worst_obj, worst_gap, secs)};
}

Outcome dc_flow() {
  DcNetwork tri;
  tri.nodes = {"1", "2", "3"};
  tri.lines = {{"12", 0, 1, 1.0, kUnlimited}, {"23", 1, 2, 1.0, kUnlimited}, {"13", 0, 2, 1.0, kUnlimited}};
  tri.slack = 2;
  build_ptdf(tri);
  auto f = line_flows(tri, {{1.0}, {0.0}, {-1.0}});
  double tri_err = std::max({std::abs(f[2][0] - 2.0 / 3.0), std::abs(f[0][0] - 1.0 / 3.0),
                             std::abs(f[1][0] - 1.0 / 3.0)});

  Scenario s = synthetic::reference(24);
  DcNetwork net = make_network(s);
  std::vector<oracle::AngleLine> lines;
  for (const auto& l : net.lines) lines.push_back({l.from, l.to, 1.0 / l.susceptance});
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-500, 500);
  const std::size_t N = net.nodes.size(), H = 100;
  std::vector<Series> inj(N, Series(H));
  for (std::size_t t = 0; t < H; ++t) {
    double sum = 0;
    for (std::size_t k = 1; k < N; ++k) sum += inj[k][t] = u(rng);
    inj[0][t] = -sum;
  }
  auto flows = line_flows(net, inj);
  double angle_err = 0;
  for (std::size_t t = 0; t < H; ++t) {
    std::vector<double> p(N);
    for (std::size_t k = 0; k < N; ++k) p[k] = inj[k][t];
    auto g = oracle::angle_flows(N, lines, net.slack, p);
    for (std::size_t l = 0; l < lines.size(); ++l) angle_err = std::max(angle_err, std::abs(flows[l][t] - g[l]));
  }
  return {tri_err <= 1e-10 && angle_err <= 1e-8,
          fmt("triangle split error %.2e (tol 1e-10); angle vs PTDF max |diff| %.2e MW over 100 injections on %zu "
              "lines (tol 1e-8)",
              tri_err, angle_err, lines.size())};
}

Outcome market_equivalence() {
  auto t0 = Clock::now();
  Scenario s = synthetic::five_node(48, true);
  DayAheadOptions oz, on;
  oz.market = Market::zonal;
  on.market = Market::nodal;
  auto z = clear_day_ahead(s, oz);
  auto n = clear_day_ahead(s, on);
  double secs = seconds_since(t0);
  double obj = std::abs(n.objective - z.objective) / std::abs(z.objective);
  double spread = 0;
  for (std::size_t zi = 0; zi < s.zones.size(); ++zi)
    for (std::size_t t = 0; t < s.hours; ++t) {
      double lo = kUnlimited, hi = -kUnlimited;
      for (std::size_t k = 0; k < s.nodes.size(); ++k)
        if (s.zone_index(s.nodes[k].zone) == zi) {
          lo = std::min(lo, n.prices[k][t]);
          hi = std::max(hi, n.prices[k][t]);
        }
      spread = std::max(spread, (hi - lo) / std::max(1.0, std::abs(hi)));
    }
  return {obj <= 1e-6 && spread <= 1e-6 && secs < 5,
          fmt("relative objective gap %.2e (tol 1e-6); max within-zone nodal price spread %.2e (tol 1e-6); %.2f s "
              "(limit 5 s)",
              obj, spread, secs)};
}

Outcome congestion_ordering() {
  Scenario s = synthetic::two_node(24);
  std::vector<Series> bought(s.nodes.size(), Series(s.hours, 0.0));
  for (const auto& c : s.clusters)
    for (std::size_t t = 0; t < s.hours; ++t) bought[s.node_index(c.node)][t] = -c.demand[t];
  DayAheadOptions o;
  o.market = Market::nodal;
  auto nodal = clear_day_ahead(s, o);
  o.market = Market::zonal;
  auto zonal = clear_day_ahead(s, o);
  double price_err = 0;
  for (std::size_t t = 0; t < s.hours; ++t)
    price_err = std::max({price_err, std::abs(nodal.prices[0][t] - 10), std::abs(nodal.prices[1][t] - 50)});
  auto rz = run_redispatch(s, zonal, bought);
  double up_err = 0, down_err = 0;
  for (std::size_t t = 0; t < s.hours; ++t) {
    double up = 0, down = 0;
    for (std::size_t p = 0; p < s.plants.size(); ++p) {
      up += rz.plant_up[p][t];
      down += rz.plant_down[p][t];
    }
    up_err = std::max(up_err, std::abs(up - 20));
    down_err = std::max(down_err, std::abs(down - 20));
  }
  auto rn = run_redispatch(s, nodal, bought);
  bool ok = price_err <= 1e-9 && up_err <= 1e-9 && down_err <= 1e-9 && std::abs(rn.objective) <= 1e-9;
  return {ok, fmt("nodal prices (%.4f, %.4f), max error %.2e; zonal redispatch up/down per hour 20 +- %.2e / %.2e; "
                  "redispatch cost after nodal clearing %.2e (tol 1e-9)",
                  nodal.prices[0][0], nodal.prices[1][0], price_err, up_err, down_err, rn.objective)};
}

Outcome prosumage_oracle() {
  std::mt19937_64 rng(606);
  auto grid = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng) * 0.1; };
  HomeBattery lossless{0, 1, 1};
  CostBook costs;
  costs.mc_pv = 1.5;
  costs.mc_s = 2.0;
  Tariff tariff;
  tariff.t_var = 200;
  tariff.t_feed = 40;
  auto regime = TariffRegime::make(Market::nodal, Pricing::real_time, tariff);
  double worst = 0;
  std::size_t states = 0;
  const int runs = 20;
  for (int run = 0; run < runs; ++run) {
    const std::size_t T = 6;
    ProsumerCluster c;
    c.node = "H";
    c.household_count = 1;
    c.pv_cap = 1e6;
    Series prices(T);
    for (std::size_t t = 0; t < T; ++t) {
      c.demand.push_back(grid(0, 8));
      c.pv_availability.push_back(grid(0, 10));
      prices[t] = std::uniform_real_distribution<double>(-20, 150)(rng);
    }
    FixedInvestments pin{1.0, grid(0, 6), grid(0, 3)};
    auto d = optimize_prosumers(c, prices, regime, costs, lossless, 8760, &pin);

    oracle::GridProsumer g;
    g.demand = c.demand;
    g.pv_available = c.pv_availability;
    for (std::size_t t = 0; t < T; ++t) {
      g.buy.push_back(regime.t_fix + regime.t_var + prices[t]);
      g.sell.push_back(regime.t_feed + prices[t]);
    }
    g.battery_mwh = pin.battery_mwh;
    g.battery_mw = pin.battery_mw;
    g.cost_charge = costs.mc_pv + costs.mc_s;
    g.cost_discharge = costs.mc_s;
    g.fixed_cost = T / 8760.0 *
                   ((costs.c_invest_pv + costs.c_fix_pv) * pin.pv_mw +
                    (costs.c_invest_se + costs.c_fix_s / 2) * pin.battery_mwh +
                    (costs.c_invest_sp + costs.c_fix_s / 2) * pin.battery_mw);
    auto best = oracle::grid_search(g);
    states += best.evaluated;
    worst = std::max(worst, std::abs(d.objective - best.objective));
  }
  return {worst <= 1e-6, fmt("%d six-hour runs, %zu dispatch paths evaluated; max |LP - grid search| %.2e EUR "
                             "(tol 1e-6)",
                             runs, states, worst)};
}

// F_t > 0 with stored energy left over is allowed only while discharge sits
// at the power limit.
std::size_t immediate_discharge_violations(const ProsumerDecision& d, std::size_t& hours_with_storage) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < d.purchase.size(); ++t) {
    if (d.purchase[t] <= 1e-7) continue;
    if (d.soc[t] > 1e-7) ++hours_with_storage;
    if (d.soc[t] > 1e-7 && d.discharge[t] < d.invest_sp - 1e-7) ++bad;
  }
  return bad;
}

Outcome immediate_discharge(const Scenario& s, const std::vector<ScenarioResult>& results) {
  if (s.home_battery.self_discharge <= 0) return {false, "reference home battery has no self-discharge"};
  std::size_t bad = 0, checked = 0, stored = 0, with_battery = 0;
  for (const auto& r : results) {
    if (r.regime.pricing != Pricing::time_invariant) continue;
    for (const auto* ds : {&r.step2, &r.step4})
      for (const auto& d : *ds) {
        bad += immediate_discharge_violations(d, stored);
        checked += d.purchase.size();
        with_battery += d.invest_se > 1e-6;
      }
  }
  return {bad == 0 && with_battery > 0,
          fmt("%zu household-hours under time-invariant pricing (sd %.0e/h, %zu schedules with batteries); "
              "%zu hours buying while holding storage, %zu below the power limit",
              checked, s.home_battery.self_discharge, with_battery, stored, bad)};
}

const ScenarioResult& find(const std::vector<ScenarioResult>& results, Market m, Pricing p) {
  for (const auto& r : results)
    if (r.regime.market == m && r.regime.pricing == p) return r;
  throw std::runtime_error("regime missing from the study");
}

Outcome regime_effects(const Scenario& s, const std::vector<ScenarioResult>& results) {
  const auto& zti = find(results, Market::zonal, Pricing::time_invariant);
  const auto& nti = find(results, Market::nodal, Pricing::time_invariant);
  double zp = system_average_price(s, zti.step1), np = system_average_price(s, nti.step1);
  bool a = zp >= np - 1e-9;

  bool b = true;
  std::string pv;
  for (Pricing p : {Pricing::time_invariant, Pricing::real_time}) {
    double zpv = prosumer_totals(s, find(results, Market::zonal, p).step2).pv_mw;
    double npv = prosumer_totals(s, find(results, Market::nodal, p).step2).pv_mw;
    b = b && zpv >= npv - 1e-6;
    pv += fmt(" %s %.1f/%.1f MW", to_string(p), zpv, npv);
  }

  // Same capacities and the same step-3 prices; only the tariff's energy
  // component differs.
  bool c = true;
  std::string feed;
  for (Market m : {Market::zonal, Market::nodal}) {
    const auto& ti = find(results, m, Pricing::time_invariant);
    auto rtp = TariffRegime::make(m, Pricing::real_time, s.tariff);
    double f_ti = 0, f_rtp = 0;
    for (std::size_t k = 0; k < s.clusters.size(); ++k) {
      const ProsumerCluster& cl = s.clusters[k];
      std::size_t n = s.node_index(cl.node);
      Series e = energy_component(rtp, price_at_node(s, ti.step3, n), load_at_node(s, m, n));
      FixedInvestments pin = ti.step2[k].investments();
      auto d = optimize_prosumers(cl, e, rtp, s.costs, s.home_battery, s.hours_per_year, &pin);
      for (double x : d.feed_in) f_rtp += x;
      for (double x : ti.step4[k].feed_in) f_ti += x;
    }
    double dev = std::abs(f_rtp - f_ti) / f_ti;
    c = c && f_ti > 0 && dev <= 0.05;
    feed += fmt(" %s TI %.1f MWh vs RTP %.1f MWh (%.2f%%)", to_string(m), f_ti, f_rtp, 100 * dev);
  }
  return {a && b && c, fmt("(a) %s avg price zonal %.2f >= nodal %.2f EUR/MWh; (b) %s PV zonal/nodal:%s; (c) %s "
                           "feed-in within 5%%:",
                           a ? "ok" : "violated", zp, np, b ? "ok" : "violated", pv.c_str(), c ? "ok" : "violated") +
                           feed};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = testsupport::slurp(e.path());
  return files;
}

Outcome pipeline_integrity(const Scenario& s, const std::vector<ScenarioResult>& results, double secs,
                           const fs::path& first) {
  double cap_err = 0;
  for (const auto& r : results)
    for (std::size_t k = 0; k < s.clusters.size(); ++k) {
      std::size_t n = s.node_index(s.clusters[k].node);
      cap_err = std::max({cap_err, std::abs(r.step3_assets.pv_mw[n] - r.step2[k].invest_pv),
                          std::abs(r.step3_assets.battery_mwh[n] - r.step2[k].invest_se),
                          std::abs(r.step3_assets.battery_mw[n] - r.step2[k].invest_sp)});
    }
  fs::path second = testsupport::fresh_dir("acceptance_study_b");
  write_study(s, run_matrix(s), second);
  auto a = tree(first), b = tree(second);
  bool same = a == b;
  bool ok = cap_err == 0 && same && secs < 120;
  return {ok, fmt("step-3 vs step-2 capacity max |diff| %.1e (exact); rerun %s (%zu files); four-regime %zu-node/%zu-h "
                  "study %.1f s (limit 120 s)",
                  cap_err, same ? "byte-identical" : "DIFFERS", a.size(), s.nodes.size(), s.hours, secs)};
}

Outcome balance_invariants(const std::vector<ScenarioResult>& results, const fs::path& out) {
  double worst = 0;
  std::size_t checked = 0;
  for (const auto& r : results) {
    auto res = verify::check_regime_dir(out / r.regime.name());
    worst = std::max(worst, res.worst());
    checked += res.balances_checked;
  }
  return {worst <= 1e-6 && checked > 0,
          fmt("%zu balance rows re-derived from CSV output of %zu regimes; worst residual %.2e (tol 1e-6)", checked,
              results.size(), worst)};
}

}  // namespace

int main() {
  report(1, "lp kernel vs vertex enumeration", lp_kernel);
  report(2, "dc flow", dc_flow);
  report(3, "zonal/nodal equivalence without limits", market_equivalence);
  report(4, "two-node congestion ordering", congestion_ordering);
  report(5, "prosumer LP vs grid search", prosumage_oracle);

  Scenario s = synthetic::reference(168);
  fs::path out = testsupport::fresh_dir("acceptance_study_a");
  std::vector<ScenarioResult> results;
  double secs = 0;
  std::string study_error;
  try {
    auto t0 = Clock::now();
    results = run_matrix(s);
    write_study(s, results, out);
    secs = seconds_since(t0);
  } catch (const std::exception& e) {
    study_error = e.what();
  }
  auto need_study = [&](auto f) {
    return [&, f] {
      if (!study_error.empty()) return Outcome{false, "reference study failed: " + study_error};
      return f();
    };
  };
  report(6, "immediate discharge under time-invariant pricing",
         need_study([&] { return immediate_discharge(s, results); }));
  report(7, "directional regime effects", need_study([&] { return regime_effects(s, results); }));
  report(8, "pipeline integrity", need_study([&] { return pipeline_integrity(s, results, secs, out); }));
  report(9, "balance invariants from CSV", need_study([&] { return balance_invariants(results, out); }));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
