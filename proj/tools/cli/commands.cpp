#include "cli/commands.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/io.hpp"
#include "profmon/errors.hpp"
#include "profmon/simulate.hpp"
#include "profmon/tables.hpp"
#include "profmon/validate.hpp"

namespace profmon::cli {

namespace {

// Runs `body` and maps exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NoBracket& e) {
    err << "calibration failed: " << e.what() << '\n';
    return kExitCalibrationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

// Output goes to the named file when given, else to `fallback`.
class Sink {
 public:
  Sink(const std::optional<std::filesystem::path>& path, std::ostream& fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot write " + path->string());
    }
    stream_ = path ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw InputError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

ChartConfig chart_config(double theta, double l_b, bool steady_state) {
  ChartConfig c;
  c.theta = theta;
  c.l_b = l_b;
  c.limit_mode = steady_state ? LimitMode::kSteadyState : LimitMode::kTimeVarying;
  c.validate();
  return c;
}

std::string describe(const ArlEstimate& e) {
  std::ostringstream s;
  s << "in-control ARL " << format_short(e.mean_rl) << " (std err " << format_short(e.std_err)
    << ", " << e.replications << " replications, " << e.censored << " censored)";
  return s.str();
}

void write_arl_header(std::ostream& out, std::size_t p) {
  out << "table,rho,lambda1,lambda2";
  for (std::size_t j = 1; j <= p; ++j) out << ",intercept_shift_" << j;
  for (std::size_t j = 1; j <= p; ++j) out << ",slope_shift_" << j;
  for (std::size_t j = 1; j <= p; ++j) out << ",stddev_factor_" << j;
  out << ",mean_rl,std_err,replications,censored,published_arl,comparison_arl\n";
}

struct ArlRow {
  std::optional<int> table;
  std::optional<double> rho;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  const ShiftScenario* scenario;
  ArlEstimate estimate;
  std::optional<double> published;
  std::optional<double> comparison;
};

void write_arl_row(std::ostream& out, const ArlRow& r) {
  auto opt = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_short(*v);
  };
  if (r.table) out << *r.table;
  opt(r.rho);
  opt(r.lambda1);
  opt(r.lambda2);
  for (double v : r.scenario->intercept_shifts) out << ',' << format_short(v);
  for (double v : r.scenario->slope_shifts) out << ',' << format_short(v);
  for (double v : r.scenario->stddev_factors) out << ',' << format_short(v);
  out << ',' << format_short(r.estimate.mean_rl) << ',' << format_short(r.estimate.std_err) << ','
      << r.estimate.replications << ',' << r.estimate.censored;
  opt(r.published);
  opt(r.comparison);
  out << '\n';
}

}  // namespace

int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = read_model(opts.model);
    SimulationConfig config;
    config.replications = opts.reps;
    config.seed = opts.seed;
    config.max_steps = opts.max_steps;
    config.workers = opts.workers;
    const auto cal = calibrate_limit(model, opts.theta, opts.target_arl, config);
    out << "l_b " << format_short(cal.constant) << '\n';
    out << "  theta " << format_short(opts.theta) << ", " << describe(cal.estimate) << '\n';
    if (cal.estimate.censored > 0) {
      err << "warning: " << cal.estimate.censored << " runs censored at " << opts.max_steps
          << " steps\n";
    }
    if (opts.shewhart) {
      const auto band = calibrate_shewhart(model, opts.target_arl, config);
      out << "m_alpha " << format_short(band.constant) << '\n';
      out << "  " << describe(band.estimate) << " from " << band.estimate.replications
          << " samples\n";
    }
    return kExitOk;
  });
}

int cmd_arl(const ArlOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.table.has_value() == opts.scenario_file.has_value()) {
      throw InputError("give exactly one of --table or --scenario-file");
    }
    const auto model = read_model(opts.model);
    const auto chart = chart_config(opts.theta, opts.l_b, opts.steady_state);
    SimulationConfig config;
    config.replications = opts.reps;
    config.seed = opts.seed;
    config.max_steps = opts.max_steps;
    config.workers = opts.workers;

    std::uint64_t censored = 0;
    Sink sink(opts.out, out);
    write_arl_header(sink.get(), model.profiles());

    if (opts.table) {
      const int id = *opts.table;
      if (id < kFirstTable || id > kLastTable) {
        throw InputError("unknown table " + std::to_string(id) + " (expected 1..8)");
      }
      if (model.profiles() != 2) throw InputError("reference tables need a two-profile model");
      const auto& table = reference_table(id);
      for (std::size_t r = 0; r < table.rhos.size(); ++r) {
        const auto rho_model = with_correlation(model, table.rhos[r]);
        const auto cells = table.cells_for(table.rhos[r]);
        std::vector<ShiftScenario> grid;
        for (const auto& c : cells) grid.push_back(c.scenario);
        const auto first_stream = static_cast<std::uint32_t>((id << 16) | (r << 8));
        const auto estimates = arl_table(rho_model, chart, config, grid, first_stream);
        for (std::size_t k = 0; k < cells.size(); ++k) {
          censored += estimates[k].censored;
          write_arl_row(sink.get(), {id, cells[k].rho, cells[k].lambda1, cells[k].lambda2,
                                     &grid[k], estimates[k], cells[k].published_arl,
                                     cells[k].comparison_arl});
        }
      }
    } else {
      const auto grid = read_scenarios(*opts.scenario_file, model.profiles());
      const auto estimates = arl_table(model, chart, config, grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        censored += estimates[k].censored;
        write_arl_row(sink.get(), {std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                   &grid[k], estimates[k], std::nullopt, std::nullopt});
      }
    }
    sink.finish();
    if (censored > 0) {
      err << "warning: " << censored << " runs censored at " << opts.max_steps
          << " steps; their means are biased low\n";
    }
    return kExitOk;
  });
}

int cmd_monitor(const MonitorOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = read_model(opts.model);
    const auto chart = chart_config(opts.theta, opts.l_b, opts.steady_state);
    const auto sb = sigma_b(model.covariance(), model.design());
    std::ifstream data(opts.data);
    if (!data) throw InputError("cannot open " + opts.data.string());

    Sink sink(opts.out, out);
    SampleCsvReader reader(data, model);
    auto state = ewma_init(model);
    while (auto group = reader.next()) {
      auto [next, verdict] = process_sample(state, group->y, model, sb, chart);
      state = next;
      MonitorRecord record{group->sample_id, state.j, verdict, state.z,
                           fit_profiles(group->y, model.design())};
      sink.get() << to_jsonl(record) << '\n';
    }
    sink.finish();
    return kExitOk;
  });
}

int cmd_check_cov(const CheckCovOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = read_model(opts.model);
    const auto report = check_covariances(model, opts.reps, opts.seed);

    out << "covariance check: " << report.samples << " simulated samples, pass at |z| <= "
        << format_short(report.z_threshold) << "\n\n";
    auto print = [&](const std::vector<CovarianceCheck>& rows) {
      out << std::left << std::setw(17) << "quantity" << std::setw(4) << "u" << std::setw(4)
          << "v" << std::right << std::setw(14) << "analytic" << std::setw(14) << "simulated"
          << std::setw(12) << "std_err" << std::setw(10) << "z" << "  result\n";
      for (const auto& c : rows) {
        const bool pair = c.quantity != "s11" && c.quantity != "s22" && c.quantity != "s12";
        out << std::left << std::setw(17) << c.quantity << std::setw(4)
            << (pair ? std::to_string(c.u + 1) : "-") << std::setw(4)
            << (pair ? std::to_string(c.v + 1) : "-") << std::right << std::setw(14)
            << format_short(c.analytic) << std::setw(14) << format_short(c.simulated.value)
            << std::setw(12) << format_short(c.simulated.std_err) << std::setw(10)
            << format_short(c.z_score()) << "  " << (c.pass ? "pass" : "FAIL") << '\n';
      }
    };
    out << "derived formulas (intercept factor 1/n + x_bar^2/s_xx)\n";
    print(report.derived);
    out << "\nprinted variant (intercept factor 1/n + x_bar/s_xx)\n";
    print(report.printed);
    out << "\nderived formulas: " << (report.derived_pass() ? "all pass" : "FAILURES") << '\n';
    out << "printed variant: " << (report.printed_pass() ? "all pass" : "rejected") << '\n';
    return kExitOk;
  });
}

int cmd_simulate_data(const SimulateDataOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = read_model(opts.model);
    auto scenario = ShiftScenario::in_control(model.profiles());
    if (opts.scenario_file) {
      const auto all = read_scenarios(*opts.scenario_file, model.profiles());
      if (all.size() != 1) throw InputError("--scenario-file must hold exactly one scenario");
      scenario = all.front();
    }
    const auto shifted = apply_scenario(model, scenario);
    Sink sink(opts.out, out);
    write_samples_header(sink.get(), model.profiles());
    for (std::uint64_t k = 1; k <= opts.samples; ++k) {
      NormalStream rng(opts.seed, 0, static_cast<std::uint32_t>(k));
      write_sample(sink.get(), std::to_string(k), model.design(), generate_sample(shifted, rng));
    }
    sink.finish();
    return kExitOk;
  });
}

}  // namespace profmon::cli
