// prosumgrid command-line tool: validate, run, export-lp, generate.
//
// Exit codes: 0 success, 1 validation failure, 2 solver failure.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "prosumgrid/lp/mps.hpp"
#include "prosumgrid/pipeline.hpp"
#include "prosumgrid/report.hpp"
#include "prosumgrid/scenario_io.hpp"
#include "prosumgrid/study.hpp"
#include "prosumgrid/synthetic.hpp"

namespace fs = std::filesystem;
using namespace prosumgrid;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSolver = 2;

int report_scenario_error(const ScenarioError& e) {
  for (const auto& i : e.issues()) std::cerr << i.str() << "\n";
  std::cerr << e.issues().size() << " issue" << (e.issues().size() == 1 ? "" : "s") << "\n";
  return kValidation;
}

Scenario load_with_horizon(const fs::path& dir, std::optional<std::size_t> horizon) {
  Scenario s = load_scenario(dir);
  if (horizon && *horizon != s.hours) s = with_horizon(s, *horizon);
  return s;
}

int cmd_validate(const fs::path& dir) {
  Scenario s;
  auto issues = check_scenario(dir, s);
  for (const auto& i : issues) std::cout << i.str() << "\n";
  std::cout << issues.size() << " issue" << (issues.size() == 1 ? "" : "s") << "\n";
  if (!issues.empty()) return kValidation;
  std::cout << s.name << ": " << s.nodes.size() << " nodes, " << s.lines.size() << " lines, " << s.zones.size()
            << " zones, " << s.plants.size() << " plants, " << s.storages.size() << " storages, "
            << s.clusters.size() << " household clusters, " << s.hours << " hours\n";
  return kOk;
}

struct RunArgs {
  std::string manifest, scenario, out;
  std::vector<std::string> regimes;
  std::optional<std::size_t> horizon, workers;
};

int cmd_run(const RunArgs& a) {
  StudyManifest m;
  if (!a.manifest.empty()) m = load_manifest(a.manifest);
  if (!a.scenario.empty()) m.scenario = a.scenario;
  if (!a.out.empty()) m.output = a.out;
  if (!a.regimes.empty()) m.regimes = a.regimes;
  if (a.horizon) m.horizon = a.horizon;
  if (m.scenario.empty()) throw ManifestError("no scenario given (--scenario or manifest)");
  if (m.output.empty()) throw ManifestError("no output directory given (--out or manifest)");
  std::size_t workers = resolve_workers(a.workers, m.workers);

  Scenario s = load_with_horizon(m.scenario, m.horizon);
  auto regimes = select_regimes(m.regimes, s.tariff);
  auto t0 = std::chrono::steady_clock::now();
  RunOptions opt;
  opt.workers = workers;
  auto results = run_matrix(s, regimes, opt);
  write_study(s, results, m.output);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& r : results)
    std::cout << r.regime.name() << ": avg price " << csv::num(system_average_price(s, r.step1)) << " EUR/MWh, PV "
              << csv::num(prosumer_totals(s, r.step2).pv_mw) << " MW, redispatch up "
              << csv::num(r.redispatch.increase_mwh) << " MWh\n";
  std::cout << "wrote " << m.output.string() << " (" << results.size() << " regimes, " << workers << " workers, "
            << static_cast<int>(secs * 10) / 10.0 << " s)\n";
  return kOk;
}

int cmd_export(const std::string& scenario, const std::string& regime_name, int step, const std::string& node,
               const std::string& out, std::optional<std::size_t> horizon) {
  Scenario s = load_with_horizon(scenario, horizon);
  auto regime = parse_regime(regime_name, s.tariff);
  if (!regime) throw ManifestError("unknown regime '" + regime_name + "'");
  lp::LpProblem p = step_problem(s, *regime, step, node);
  if (out.empty() || out == "-") lp::write_mps(p, std::cout);
  else {
    std::ofstream f(out);
    if (!f) throw ManifestError(out + ": cannot write");
    lp::write_mps(p, f);
  }
  return kOk;
}

int cmd_generate(const std::string& name, const std::string& out, std::optional<std::size_t> horizon) {
  Scenario s;
  if (name == "two_node") s = synthetic::two_node(horizon.value_or(24));
  else if (name == "copper_plate") s = synthetic::copper_plate(horizon.value_or(24));
  else if (name == "five_node") s = synthetic::five_node(horizon.value_or(48), false);
  else if (name == "five_node_unlimited") s = synthetic::five_node(horizon.value_or(48), true);
  else if (name == "reference") s = synthetic::reference(horizon.value_or(168));
  else throw ManifestError("unknown built-in scenario '" + name + "'");
  save_scenario(s, out);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zonal vs nodal pricing with household prosumage: scenario runs and reports"};
  app.require_subcommand(1);

  std::string scenario;
  auto* validate = app.add_subcommand("validate", "Check a scenario directory and list issues");
  validate->add_option("scenario,--scenario", scenario, "Scenario directory")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the regime matrix and write CSV reports");
  run_cmd->add_option("--manifest", run.manifest, "Study manifest (JSON)");
  run_cmd->add_option("--scenario", run.scenario, "Scenario directory (overrides manifest)");
  run_cmd->add_option("--regimes", run.regimes, "Regimes to run (default: all four)")->delimiter(',');
  run_cmd->add_option("--horizon", run.horizon, "Use only the first N hours")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "Output directory (overrides manifest)");
  run_cmd->add_option("--workers", run.workers, "Concurrent regime runs")->check(CLI::PositiveNumber);

  std::string regime = "zonal_time_invariant", node, out;
  int step = 1;
  std::optional<std::size_t> horizon;
  auto* exp = app.add_subcommand("export-lp", "Write the LP of one pipeline step in free MPS format");
  exp->add_option("--scenario", scenario, "Scenario directory")->required();
  exp->add_option("--regime", regime, "Regime name");
  exp->add_option("--step", step, "Pipeline step 1-5")->check(CLI::Range(1, 5));
  exp->add_option("--node", node, "Household node (steps 2 and 4)");
  exp->add_option("--horizon", horizon, "Use only the first N hours")->check(CLI::PositiveNumber);
  exp->add_option("--out", out, "Output file (default: stdout)");

  std::string name;
  auto* gen = app.add_subcommand("generate", "Write a built-in scenario directory");
  gen->add_option("name", name, "two_node, copper_plate, five_node, five_node_unlimited or reference")->required();
  gen->add_option("--out", out, "Target directory")->required();
  gen->add_option("--horizon", horizon, "Hours")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) return cmd_validate(scenario);
    if (*run_cmd) return cmd_run(run);
    if (*exp) return cmd_export(scenario, regime, step, node, out, horizon);
    if (*gen) return cmd_generate(name, out, horizon);
  } catch (const ScenarioError& e) {
    return report_scenario_error(e);
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.solver_failure() ? kSolver : kValidation;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}
