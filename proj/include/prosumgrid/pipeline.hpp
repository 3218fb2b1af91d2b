#pragma once

// Five-step linkage per tariff regime:
//   1. day-ahead clearing with placeholder rooftop PV and home batteries -> prices
//   2. prosumer investment and dispatch against those prices
//   3. day-ahead re-clearing with the invested capacities instead of placeholders
//   4. prosumer dispatch with investments pinned, against step-3 prices
//   5. redispatch with the step-4 prosumer net series

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "prosumgrid/grid_flow.hpp"
#include "prosumgrid/market.hpp"
#include "prosumgrid/prosumage.hpp"
#include "prosumgrid/redispatch.hpp"
#include "prosumgrid/scenario.hpp"

namespace prosumgrid {

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string regime, int step, const std::string& what, bool solver_failure)
      : std::runtime_error(regime + ", step " + std::to_string(step) + ": " + what),
        regime_(std::move(regime)),
        step_(step),
        solver_failure_(solver_failure) {}
  const std::string& regime() const { return regime_; }
  int step() const { return step_; }
  bool solver_failure() const { return solver_failure_; }

 private:
  std::string regime_;
  int step_;
  bool solver_failure_;
};

struct ScenarioResult {
  TariffRegime regime;
  DayAheadResult step1;
  std::vector<ProsumerDecision> step2;  // one per cluster, scenario order
  ProsumerAssets step3_assets;
  DayAheadResult step3;
  std::vector<ProsumerDecision> step4;
  std::vector<Series> prosumer_net;     // [node][hour], from step 4
  RedispatchResult redispatch;
  CongestionReport congestion;
};

struct RunOptions {
  lp::SimplexOptions solver;
  std::size_t workers = 1;
};

/// Demand-weighted average of the prices seen at every node over the horizon.
inline double system_average_price(const Scenario& s, const DayAheadResult& da) {
  double num = 0, den = 0;
  for (std::size_t n = 0; n < s.nodes.size(); ++n) {
    const Series& p = price_at_node(s, da, n);
    for (std::size_t t = 0; t < s.hours; ++t) {
      num += p[t] * s.nodes[n].load[t];
      den += s.nodes[n].load[t];
    }
  }
  if (!(den > 0)) throw std::invalid_argument("zero total demand");
  return num / den;
}

/// Step-1 clearing for one market design (shared by both pricing variants).
inline DayAheadResult price_forecast(const Scenario& s, Market market, const DcNetwork& net,
                                     const lp::SimplexOptions& solver = {}) {
  DayAheadOptions o;
  o.market = market;
  o.assets = ProsumerAssets::placeholders(s);
  return clear_day_ahead(s, o, &net, solver);
}

namespace detail {

template <class F>
auto step(const TariffRegime& r, int n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SolveError& e) {
    throw PipelineError(r.name(), n, e.what(), true);
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(r.name(), n, e.what(), false);
  }
}

inline std::vector<ProsumerDecision> run_prosumers(const Scenario& s, const TariffRegime& regime,
                                                   const DayAheadResult& prices,
                                                   const std::vector<ProsumerDecision>* pinned,
                                                   const lp::SimplexOptions& solver) {
  std::vector<ProsumerDecision> out;
  for (std::size_t k = 0; k < s.clusters.size(); ++k) {
    const ProsumerCluster& c = s.clusters[k];
    std::size_t n = s.node_index(c.node);
    Series e = energy_component(regime, price_at_node(s, prices, n), load_at_node(s, regime.market, n));
    FixedInvestments fixed;
    if (pinned) fixed = (*pinned)[k].investments();
    out.push_back(optimize_prosumers(c, e, regime, s.costs, s.home_battery, s.hours_per_year,
                                     pinned ? &fixed : nullptr, solver));
  }
  return out;
}

}  // namespace detail

/// Runs the five steps for one regime. `step1` may carry a precomputed
/// price forecast for the regime's market. Throws PipelineError naming the
/// failing step.
inline ScenarioResult run_regime(const Scenario& s, const TariffRegime& regime, const DcNetwork& net,
                                 const DayAheadResult* step1 = nullptr, const lp::SimplexOptions& solver = {}) {
  ScenarioResult r;
  r.regime = regime;
  detail::step(regime, 1, [&] {
    regime.validate();
    return 0;
  });
  if (step1 && step1->market != regime.market)
    throw PipelineError(regime.name(), 1, "price forecast market does not match the regime", false);
  r.step1 = step1 ? *step1 : detail::step(regime, 1, [&] { return price_forecast(s, regime.market, net, solver); });

  r.step2 = detail::step(regime, 2, [&] { return detail::run_prosumers(s, regime, r.step1, nullptr, solver); });

  r.step3_assets = ProsumerAssets::none(s);
  for (const auto& d : r.step2) {
    std::size_t n = s.node_index(d.node);
    r.step3_assets.pv_mw[n] = d.invest_pv;
    r.step3_assets.battery_mw[n] = d.invest_sp;
    r.step3_assets.battery_mwh[n] = d.invest_se;
  }
  r.step3 = detail::step(regime, 3, [&] {
    DayAheadOptions o;
    o.market = regime.market;
    o.assets = r.step3_assets;
    return clear_day_ahead(s, o, &net, solver);
  });

  r.step4 = detail::step(regime, 4, [&] { return detail::run_prosumers(s, regime, r.step3, &r.step2, solver); });
  r.prosumer_net = aggregate_net_series(s, r.step4);

  r.redispatch = detail::step(regime, 5, [&] { return run_redispatch(s, r.step3, r.prosumer_net, &net, solver); });
  r.congestion = congestion_report(s, r.redispatch, net);
  return r;
}

inline ScenarioResult run_regime(const Scenario& s, const TariffRegime& regime) {
  DcNetwork net = make_network(s);
  return run_regime(s, regime, net);
}

/// The LP solved at `step` (1-5) of a regime, with earlier steps solved as
/// needed. Steps 2 and 4 are per cluster and need `node`.
inline lp::LpProblem step_problem(const Scenario& s, const TariffRegime& regime, int step,
                                  const std::string& node = "", const lp::SimplexOptions& solver = {}) {
  if (step < 1 || step > 5) throw std::invalid_argument("step must be 1..5");
  DcNetwork net = make_network(s);
  const ProsumerCluster* cluster = nullptr;
  std::size_t cluster_index = 0;
  if (step == 2 || step == 4) {
    for (std::size_t k = 0; k < s.clusters.size(); ++k)
      if (s.clusters[k].node == node) {
        cluster = &s.clusters[k];
        cluster_index = k;
      }
    if (!cluster) throw std::invalid_argument("no household cluster at node '" + node + "'");
  }
  DayAheadOptions o;
  o.market = regime.market;
  o.assets = ProsumerAssets::placeholders(s);
  if (step == 1) return build_day_ahead(s, o, &net).problem;

  auto prosumer_lp = [&](const DayAheadResult& prices, const FixedInvestments* fixed) {
    std::size_t n = s.node_index(cluster->node);
    Series e = energy_component(regime, price_at_node(s, prices, n), load_at_node(s, regime.market, n));
    return build_prosumer_lp(*cluster, e, regime, s.costs, s.home_battery, s.hours_per_year, fixed).problem;
  };
  DayAheadResult step1 = detail::step(regime, 1, [&] { return price_forecast(s, regime.market, net, solver); });
  if (step == 2) return prosumer_lp(step1, nullptr);

  auto step2 = detail::step(regime, 2, [&] { return detail::run_prosumers(s, regime, step1, nullptr, solver); });
  o.assets = ProsumerAssets::none(s);
  for (const auto& d : step2) {
    std::size_t n = s.node_index(d.node);
    o.assets.pv_mw[n] = d.invest_pv;
    o.assets.battery_mw[n] = d.invest_sp;
    o.assets.battery_mwh[n] = d.invest_se;
  }
  if (step == 3) return build_day_ahead(s, o, &net).problem;

  DayAheadResult step3 = detail::step(regime, 3, [&] { return clear_day_ahead(s, o, &net, solver); });
  if (step == 4) {
    FixedInvestments fixed = step2[cluster_index].investments();
    return prosumer_lp(step3, &fixed);
  }
  auto step4 = detail::step(regime, 4, [&] { return detail::run_prosumers(s, regime, step3, &step2, solver); });
  return build_redispatch(s, step3, aggregate_net_series(s, step4), net).problem;
}

/// Runs `count` tasks on at most `workers` threads. The first failure in
/// task order is rethrown after all tasks finish.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) worker();
  else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Runs every regime; each market's price forecast is computed once and
/// shared by its two pricing variants. Results follow the input order.
inline std::vector<ScenarioResult> run_matrix(const Scenario& s, const std::vector<TariffRegime>& regimes,
                                              const RunOptions& opt = {}) {
  if (regimes.empty()) throw std::invalid_argument("no regimes requested");
  DcNetwork net = make_network(s);
  std::vector<Market> markets;
  for (const auto& r : regimes)
    if (std::find(markets.begin(), markets.end(), r.market) == markets.end()) markets.push_back(r.market);
  std::vector<DayAheadResult> forecasts(markets.size());
  parallel_for(markets.size(), opt.workers, [&](std::size_t i) {
    const TariffRegime* owner = nullptr;
    for (const auto& r : regimes)
      if (r.market == markets[i] && !owner) owner = &r;
    forecasts[i] = detail::step(*owner, 1, [&] { return price_forecast(s, markets[i], net, opt.solver); });
  });
  std::vector<ScenarioResult> results(regimes.size());
  parallel_for(regimes.size(), opt.workers, [&](std::size_t i) {
    std::size_t k = std::find(markets.begin(), markets.end(), regimes[i].market) - markets.begin();
    results[i] = run_regime(s, regimes[i], net, &forecasts[k], opt.solver);
  });
  return results;
}

inline std::vector<ScenarioResult> run_matrix(const Scenario& s, const RunOptions& opt = {}) {
  return run_matrix(s, all_regimes(s.tariff), opt);
}

}  // namespace prosumgrid
