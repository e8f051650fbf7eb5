// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Table outputs and a per-cell discrepancy report go to --report-dir.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/io.hpp"
#include "profmon/chart.hpp"
#include "profmon/simulate.hpp"
#include "profmon/stats.hpp"
#include "profmon/tables.hpp"
#include "profmon/validate.hpp"

using namespace profmon;
namespace fs = std::filesystem;

namespace {

const fs::path kModel = fs::path(PROFMON_DATA_DIR) / "reference_model.json";

struct Outcome {
  bool pass = false;
  std::string detail;
};

// One row of an arl CSV produced by `profmon arl --table`.
struct CellResult {
  int table = 0;
  double rho = 0, lambda1 = 0;
  std::optional<double> lambda2;
  double mean_rl = 0, std_err = 0, published = 0;
  std::uint64_t censored = 0;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  for (std::string f; std::getline(s, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<CellResult> parse_table_csv(const std::string& text) {
  std::vector<CellResult> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  while (std::getline(in, line)) {
    const auto f = split(line);
    CellResult r;
    r.table = std::stoi(f[col["table"]]);
    r.rho = std::stod(f[col["rho"]]);
    r.lambda1 = std::stod(f[col["lambda1"]]);
    if (!f[col["lambda2"]].empty()) r.lambda2 = std::stod(f[col["lambda2"]]);
    r.mean_rl = std::stod(f[col["mean_rl"]]);
    r.std_err = std::stod(f[col["std_err"]]);
    r.censored = std::stoull(f[col["censored"]]);
    r.published = std::stod(f[col["published_arl"]]);
    rows.push_back(r);
  }
  return rows;
}

double tolerance(const CellResult& c) { return std::max(0.1 * c.published, 3.0 * c.std_err); }
bool within(const CellResult& c) { return std::abs(c.mean_rl - c.published) <= tolerance(c); }

const CellResult* find_cell(const std::vector<CellResult>& rows, double rho, double lambda) {
  for (const auto& r : rows) {
    if (std::abs(r.rho - rho) < 1e-9 && std::abs(r.lambda1 - lambda) < 1e-9) return &r;
  }
  return nullptr;
}

std::string fmt(double v) { return cli::format_short(v); }

// Spot cells within tolerance, and the estimated row for each rho of a spot
// cell must follow the published trend: non-increasing in lambda up to
// 3 combined standard errors of noise.
Outcome spot_check(const std::vector<CellResult>& rows,
                   const std::vector<std::pair<double, double>>& spots) {
  Outcome o{true, {}};
  std::ostringstream d;
  for (auto [rho, lambda] : spots) {
    const auto* c = find_cell(rows, rho, lambda);
    if (!c) {
      o.pass = false;
      d << " [rho " << rho << " lambda " << lambda << " missing]";
      continue;
    }
    const bool ok = within(*c);
    o.pass = o.pass && ok;
    d << " [rho " << fmt(rho) << " lambda " << fmt(lambda) << ": " << fmt(c->mean_rl) << " +- "
      << fmt(c->std_err) << " vs " << fmt(c->published) << (ok ? " ok" : " off") << "]";
  }
  std::vector<double> rhos;
  for (auto [rho, lambda] : spots) {
    if (std::find(rhos.begin(), rhos.end(), rho) == rhos.end()) rhos.push_back(rho);
  }
  for (double rho : rhos) {
    const CellResult* prev = nullptr;
    for (const auto& r : rows) {
      if (std::abs(r.rho - rho) > 1e-9) continue;
      if (prev && r.mean_rl > prev->mean_rl + 3 * std::hypot(r.std_err, prev->std_err)) {
        o.pass = false;
        d << " [trend broken at rho " << fmt(rho) << " lambda " << fmt(r.lambda1) << "]";
      }
      prev = &r;
    }
  }
  o.detail = d.str();
  return o;
}

Outcome criterion_ic_arl(std::uint64_t reps) {
  Outcome o{true, {}};
  std::ostringstream d;
  SimulationConfig cfg;
  cfg.replications = reps;
  const ChartConfig chart{0.2, 3.6233};
  std::uint32_t stream = 100;
  for (double rho : {0.1, 0.5, 0.9}) {
    const auto est = estimate_arl(reference_model(rho), ShiftScenario::in_control(2), cfg, chart,
                                  stream++);
    const bool ok = est.mean_rl >= 190.0 && est.mean_rl <= 210.0;
    o.pass = o.pass && ok;
    d << " [rho " << fmt(rho) << ": " << fmt(est.mean_rl) << " +- " << fmt(est.std_err) << "]";
  }
  o.detail = d.str();
  return o;
}

Outcome criterion_covariance_oracle() {
  Outcome o{true, {}};
  std::ostringstream d;
  for (double rho : {0.0, 0.5, 0.9}) {
    const auto r = check_covariances(reference_model(rho), 100000, kDefaultSeed);
    double worst = 0, printed_worst = 0;
    for (const auto& c : r.derived) worst = std::max(worst, std::abs(c.z_score()));
    for (const auto& c : r.printed) printed_worst = std::max(printed_worst, std::abs(c.z_score()));
    const bool ok = r.derived_pass() && !r.printed_pass();
    o.pass = o.pass && ok;
    d << " [rho " << fmt(rho) << ": max |z| derived " << fmt(worst) << ", printed "
      << fmt(printed_worst) << "]";
  }
  o.detail = d.str();
  return o;
}

Outcome criterion_ewma_distribution() {
  const auto model = reference_model(0.5);
  const auto sb = sigma_b(model.covariance(), model.design());
  const double theta = 0.2;
  const std::uint64_t reps = 100000;
  const std::vector<std::uint64_t> steps{1, 5, 50};
  std::vector<std::vector<double>> a(steps.size(), std::vector<double>(reps));
  std::vector<std::vector<double>> b(steps.size(), std::vector<double>(reps));
  for (std::uint64_t r = 0; r < reps; ++r) {
    NormalStream rng(kDefaultSeed, 600, static_cast<std::uint32_t>(r));
    auto state = ewma_init(model);
    std::size_t next = 0;
    CoefMatrix fit;
    for (std::uint64_t j = 1; j <= steps.back(); ++j) {
      fit_profiles_into(generate_sample(model, rng), model.design(), fit);
      state = ewma_update(state, coef_sum(fit), theta);
      if (j == steps[next]) {
        a[next][r] = state.z.b0_sum;
        b[next][r] = state.z.b1_sum;
        ++next;
      }
    }
  }
  Outcome o{true, {}};
  std::ostringstream d;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double f =
        theta / (2 - theta) * (1 - std::pow(1 - theta, 2.0 * static_cast<double>(steps[k])));
    const auto c11 = sample_covariance(a[k], a[k]);
    const auto c22 = sample_covariance(b[k], b[k]);
    const auto c12 = sample_covariance(a[k], b[k]);
    const double z11 = (c11.value - f * sb.s11) / c11.std_err;
    const double z22 = (c22.value - f * sb.s22) / c22.std_err;
    const double z12 = (c12.value - f * sb.s12) / c12.std_err;
    const double worst = std::max({std::abs(z11), std::abs(z22), std::abs(z12)});
    o.pass = o.pass && worst <= 4.0;
    d << " [j " << steps[k] << ": max |z| " << fmt(worst) << "]";
  }
  o.detail = d.str();
  return o;
}

Outcome criterion_reductions(std::uint64_t reps) {
  Outcome o{true, {}};
  std::ostringstream d;
  const auto model = reference_model(0.5);
  SimulationConfig cfg;
  cfg.replications = reps;
  const auto band = calibrate_shewhart(model, 200.0, cfg);
  d << " [m_alpha " << fmt(band.constant) << "]";

  ShiftScenario shifted = ShiftScenario::in_control(2);
  shifted.intercept_shifts[0] = 1.0;
  std::uint64_t mismatches = 0, compared = 0;
  for (const auto& scenario : {shifted, ShiftScenario::in_control(2)}) {
    for (std::uint32_t r = 0; r < reps; ++r) {
      NormalStream e_rng(kDefaultSeed, 700, r), s_rng(kDefaultSeed, 700, r);
      const auto e = run_length(model, scenario, cfg, ChartConfig{1.0, band.constant}, e_rng);
      const auto s = shewhart_run_length(model, scenario, cfg, band.constant, s_rng);
      mismatches += e.length != s.length || e.censored != s.censored;
      ++compared;
    }
  }
  o.pass = mismatches == 0;
  d << " [paired runs " << compared << ", mismatches " << mismatches << "]";

  // Consecutive limits become equal in double precision once (1 - theta)^(2j)
  // drops below the rounding unit, so strictness is checked up to there.
  const ChartConfig chart{0.2, 3.6233};
  const double asymptote = chart.l_b * std::sqrt(chart.theta / (2 - chart.theta));
  std::uint64_t last_strict = 0;
  bool decreasing = false;
  for (std::uint64_t j = 1; j < 200; ++j) {
    const double lo = control_limit(j, chart), hi = control_limit(j + 1, chart);
    if (hi > lo && last_strict == j - 1) last_strict = j;
    decreasing = decreasing || hi < lo;
  }
  const double gap = std::abs(control_limit(200, chart) - asymptote);
  const bool limits_ok = !decreasing && last_strict >= 60 && gap <= 1e-9;
  o.pass = o.pass && limits_ok;
  d << " [limit strictly increasing through j " << last_strict + 1
    << ", |limit(200) - asymptote| " << fmt(gap) << "]";
  o.detail = d.str();
  return o;
}

std::string run_arl_table(int id, std::uint64_t reps, unsigned workers) {
  cli::ArlOptions opts;
  opts.model = kModel;
  opts.table = id;
  opts.reps = reps;
  opts.workers = workers;
  std::ostringstream out, err;
  const int code = cli::cmd_arl(opts, out, err);
  if (code != cli::kExitOk) throw std::runtime_error("arl --table " + std::to_string(id) + ": " + err.str());
  return out.str();
}

void print(int id, const std::string& name, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << " :"
            << o.detail << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  fs::path report_dir = ".";
  std::uint64_t reps = 5000;
  app.add_option("--report-dir", report_dir, "where table CSVs and the discrepancy report go");
  app.add_option("--reps", reps, "replications per ARL cell")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(report_dir);

  std::map<int, Outcome> results;
  const auto clock = [] { return std::chrono::steady_clock::now(); };
  const auto seconds = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };

  results[1] = criterion_ic_arl(reps);
  print(1, "in-control ARL at l_b 3.6233 in [190, 210]", results[1]);
  {
    SimulationConfig cfg;
    cfg.replications = reps;
    try {
      const auto cal = calibrate_limit(reference_model(0.5), 0.2, 200.0, cfg);
      std::cout << "info  l_b calibrated to ARL 200 at rho 0.5: " << fmt(cal.constant)
                << " (ARL " << fmt(cal.estimate.mean_rl) << " +- " << fmt(cal.estimate.std_err)
                << "); reference value 3.6233" << std::endl;
    } catch (const std::exception& e) {
      std::cout << "info  calibration failed: " << e.what() << std::endl;
    }
  }

  // All reference tables through the CLI path; reused by the spot checks.
  std::map<int, std::vector<CellResult>> tables;
  std::string table1_csv;
  const auto t0 = clock();
  for (int id = kFirstTable; id <= kLastTable; ++id) {
    const auto s = clock();
    const auto csv = run_arl_table(id, reps, 0);
    if (id == 1) table1_csv = csv;
    std::ofstream(report_dir / ("table" + std::to_string(id) + ".csv"), std::ios::binary) << csv;
    tables[id] = parse_table_csv(csv);
    std::cout << "info  table " << id << ": " << tables[id].size() << " cells in "
              << fmt(seconds(s, clock())) << " s" << std::endl;
  }
  const double table_seconds = seconds(t0, clock());

  results[2] = spot_check(tables[1], {{0.1, 0.8}, {0.1, 1.0}, {0.1, 1.2}, {0.1, 2.0}});
  {
    // Near-200 cells are judged on level: within 5% of 200.
    std::ostringstream d;
    for (const auto& c : tables[1]) {
      if (std::abs(c.rho - 0.1) > 1e-9 || c.lambda1 > 0.6 + 1e-9) continue;
      const bool ok = std::abs(c.mean_rl - 200.0) <= 10.0;
      results[2].pass = results[2].pass && ok;
      d << " [rho 0.1 lambda " << fmt(c.lambda1) << ": " << fmt(c.mean_rl)
        << (ok ? " ok" : " off") << "]";
    }
    results[2].detail += d.str();
  }
  print(2, "table 1 spot cells", results[2]);

  results[3] = spot_check(tables[3], {{0.1, 0.2}, {0.5, 0.25}, {0.9, 0.25}});
  print(3, "table 3 spot cells", results[3]);

  results[4] = spot_check(tables[7], {{0.1, 2.0}, {0.9, 2.0}});
  print(4, "table 7 spot cells", results[4]);

  results[5] = criterion_covariance_oracle();
  print(5, "estimator covariance oracle (derived passes, printed variant fails)", results[5]);

  results[6] = criterion_ewma_distribution();
  print(6, "EWMA covariance after j steps", results[6]);

  results[7] = criterion_reductions(reps);
  print(7, "theta = 1 equals band chart; limit schedule", results[7]);

  {
    const auto one = run_arl_table(1, reps, 1);
    const auto four = run_arl_table(1, reps, 4);
    Outcome o;
    o.pass = one == four && one == table1_csv;
    o.detail = " [workers 1 vs 4 vs default: " + std::string(o.pass ? "identical" : "DIFFERENT") +
               ", " + std::to_string(one.size()) + " bytes]";
    results[8] = o;
    print(8, "arl --table 1 byte-identical across runs and worker counts", results[8]);
  }

  {
    const auto path = report_dir / "table_discrepancies.csv";
    std::ofstream rep(path, std::ios::binary);
    rep << "table,rho,lambda1,lambda2,mean_rl,std_err,published_arl,abs_diff,tolerance,within,censored\n";
    std::size_t total = 0, inside = 0;
    std::ostringstream per_table;
    for (const auto& [id, rows] : tables) {
      std::size_t in_table = 0;
      for (const auto& c : rows) {
        const bool ok = within(c);
        in_table += ok;
        rep << id << ',' << fmt(c.rho) << ',' << fmt(c.lambda1) << ','
            << (c.lambda2 ? fmt(*c.lambda2) : "") << ',' << fmt(c.mean_rl) << ','
            << fmt(c.std_err) << ',' << fmt(c.published) << ',' << fmt(std::abs(c.mean_rl - c.published))
            << ',' << fmt(tolerance(c)) << ',' << (ok ? "yes" : "no") << ',' << c.censored << '\n';
      }
      total += rows.size();
      inside += in_table;
      per_table << " t" << id << " " << in_table << "/" << rows.size();
    }
    std::ofstream notes(report_dir / "table_discrepancies.txt");
    notes << "Cells outside max(10%, 3 std err) of the published ARL: " << total - inside << " of "
          << total << ".\n"
          << "First suspects for disagreement are the intercept variance factor (x_bar versus\n"
          << "x_bar^2 over s_xx) and the bracket placement in the coefficient-sum covariance.\n"
          << "The x_bar form is rejected by the covariance oracle (criterion 5) and makes the\n"
          << "coefficient-sum covariance indefinite on the reference design, so it cannot be\n"
          << "the source of the published values either. See table_discrepancies.csv.\n";
    Outcome o;
    o.pass = table_seconds < 900.0 && total > 0;
    o.detail = " [" + fmt(table_seconds) + " s for " + std::to_string(total) +
               " cells; within tolerance:" + per_table.str() + "; report " + path.string() + "]";
    results[9] = o;
    print(9, "full tables under 15 minutes with per-cell report", results[9]);
  }

  std::size_t failed = 0;
  for (const auto& [id, o] : results) failed += !o.pass;
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
