#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "profmon/chart.hpp"
#include "profmon/rng.hpp"

namespace profmon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCalibrationFailure = 3;

struct CalibrateOptions {
  std::filesystem::path model;
  double theta = 0.2;
  double target_arl = 200.0;
  std::uint64_t reps = 5000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t max_steps = 20000;
  bool shewhart = false;
  unsigned workers = 0;
};

struct ArlOptions {
  std::filesystem::path model;
  std::optional<int> table;
  std::optional<std::filesystem::path> scenario_file;
  std::uint64_t reps = 5000;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t max_steps = 20000;
  double theta = 0.2;
  double l_b = 3.6233;
  bool steady_state = false;
  unsigned workers = 0;
  std::optional<std::filesystem::path> out;  // stdout when empty
};

struct MonitorOptions {
  std::filesystem::path model;
  std::filesystem::path data;
  double theta = 0.2;
  double l_b = 3.6233;
  bool steady_state = false;
  std::optional<std::filesystem::path> out;
};

struct CheckCovOptions {
  std::filesystem::path model;
  std::uint64_t reps = 100000;
  std::uint64_t seed = kDefaultSeed;
};

struct SimulateDataOptions {
  std::filesystem::path model;
  std::optional<std::filesystem::path> scenario_file;
  std::uint64_t samples = 100;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::filesystem::path> out;
};

// Each command writes its product to `out` (or the --out file) and
// diagnostics to `err`, and returns the process exit code.
int cmd_calibrate(const CalibrateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_arl(const ArlOptions& opts, std::ostream& out, std::ostream& err);
int cmd_monitor(const MonitorOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check_cov(const CheckCovOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate_data(const SimulateDataOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace profmon::cli
