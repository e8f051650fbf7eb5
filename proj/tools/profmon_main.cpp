#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace profmon::cli;

  CLI::App app{"profmon: EWMA monitoring of multivariate simple linear profiles"};
  app.require_subcommand(1);

  CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "Calibrate L_B (and m_alpha) to a target in-control ARL");
  calibrate->add_option("model", cal.model, "Model JSON file")->required();
  calibrate->add_option("--theta", cal.theta, "EWMA smoothing constant")->capture_default_str();
  calibrate->add_option("--target-arl", cal.target_arl, "Target in-control ARL")->capture_default_str();
  calibrate->add_option("--reps", cal.reps, "First-stage replications (later stages use 4x and 20x)")
      ->capture_default_str();
  calibrate->add_option("--seed", cal.seed, "Random seed")->capture_default_str();
  calibrate->add_option("--max-steps", cal.max_steps, "Run-length cap")->capture_default_str();
  calibrate->add_option("--workers", cal.workers, "Worker threads (0 = all cores)");
  calibrate->add_flag("--shewhart", cal.shewhart, "Also calibrate the memoryless band chart");

  ArlOptions arl;
  int table_id = 0;
  std::string scenario_file;
  std::string arl_out;
  auto* arl_cmd = app.add_subcommand("arl", "Estimate ARLs for a reference table or scenario file");
  arl_cmd->add_option("model", arl.model, "Model JSON file")->required();
  auto* table_opt = arl_cmd->add_option("--table", table_id, "Reference table id (1..8)");
  auto* scen_opt = arl_cmd->add_option("--scenario-file", scenario_file, "Scenario JSON file");
  table_opt->excludes(scen_opt);
  arl_cmd->add_option("--reps", arl.reps, "Replications per scenario")->capture_default_str();
  arl_cmd->add_option("--seed", arl.seed, "Random seed")->capture_default_str();
  arl_cmd->add_option("--max-steps", arl.max_steps, "Run-length cap")->capture_default_str();
  arl_cmd->add_option("--theta", arl.theta, "EWMA smoothing constant")->capture_default_str();
  arl_cmd->add_option("--l-b", arl.l_b, "Control limit multiplier")->capture_default_str();
  arl_cmd->add_flag("--steady-state-limit", arl.steady_state, "Use the asymptotic limit for every step");
  arl_cmd->add_option("--workers", arl.workers, "Worker threads (0 = all cores)");
  arl_cmd->add_option("--out", arl_out, "Output CSV (default stdout)");

  MonitorOptions mon;
  std::string mon_out;
  auto* monitor = app.add_subcommand("monitor", "Run the chart over a samples CSV and emit JSONL verdicts");
  monitor->add_option("model", mon.model, "Model JSON file")->required();
  monitor->add_option("--data", mon.data, "Samples CSV")->required();
  monitor->add_option("--theta", mon.theta, "EWMA smoothing constant")->capture_default_str();
  monitor->add_option("--l-b", mon.l_b, "Control limit multiplier")->capture_default_str();
  monitor->add_flag("--steady-state-limit", mon.steady_state, "Use the asymptotic limit for every step");
  monitor->add_option("--out", mon_out, "Output JSONL (default stdout)");

  CheckCovOptions cov;
  auto* check_cov = app.add_subcommand("check-cov", "Compare closed-form estimator covariances with simulation");
  check_cov->add_option("model", cov.model, "Model JSON file")->required();
  check_cov->add_option("--reps", cov.reps, "Simulated samples")->capture_default_str();
  check_cov->add_option("--seed", cov.seed, "Random seed")->capture_default_str();

  SimulateDataOptions sim;
  std::string sim_scenario;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate-data", "Write synthetic samples in the monitor input format");
  simulate->add_option("model", sim.model, "Model JSON file")->required();
  simulate->add_option("--scenario-file", sim_scenario, "Scenario JSON file (default in-control)");
  simulate->add_option("--samples", sim.samples, "Number of samples K")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (*calibrate) return cmd_calibrate(cal, std::cout, std::cerr);
  if (*arl_cmd) {
    if (*table_opt) arl.table = table_id;
    if (*scen_opt) arl.scenario_file = scenario_file;
    if (!arl_out.empty()) arl.out = arl_out;
    return cmd_arl(arl, std::cout, std::cerr);
  }
  if (*monitor) {
    if (!mon_out.empty()) mon.out = mon_out;
    return cmd_monitor(mon, std::cout, std::cerr);
  }
  if (*check_cov) return cmd_check_cov(cov, std::cout, std::cerr);
  if (*simulate) {
    if (!sim_scenario.empty()) sim.scenario_file = sim_scenario;
    if (!sim_out.empty()) sim.out = sim_out;
    return cmd_simulate_data(sim, std::cout, std::cerr);
  }
  return kExitInputError;
}
