#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "profmon/chart.hpp"
#include "profmon/estimate.hpp"
#include "profmon/model.hpp"
#include "profmon/simulate.hpp"

namespace profmon::cli {

// Bad user input: unreadable file, malformed document, inconsistent data.
// `line` is the 1-based line of the offending input row when known.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::optional<std::size_t> line = std::nullopt);
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::optional<std::size_t> line_;
};

// {"x": [...], "intercepts": [...], "slopes": [...], "sigma": [[...], ...]}
ProcessModel parse_model(const nlohmann::json& doc);
ProcessModel read_model(const std::filesystem::path& path);
nlohmann::ordered_json model_to_json(const ProcessModel& model);

// {"intercept_shifts": [...], "slope_shifts": [...], "stddev_factors": [...]}.
// A file may hold one such object or an array of them. Missing keys default
// to no shift.
ShiftScenario parse_scenario(const nlohmann::json& doc, std::size_t profiles);
std::vector<ShiftScenario> read_scenarios(const std::filesystem::path& path, std::size_t profiles);

// 6 significant digits, for human-facing tables.
std::string format_short(double value);
// Shortest representation that parses back to the same double.
std::string format_exact(double value);

// ---------------------------------------------------------------------------
// Samples CSV: header "sample_id,x,y1,...,yp", one row per design point,
// rows of a sample contiguous.

struct SampleGroup {
  std::string sample_id;
  SampleMatrix y;  // rows in design order
};

class SampleCsvReader {
 public:
  SampleCsvReader(std::istream& in, const ProcessModel& model);

  // Next complete sample, or nullopt at end of input. Throws InputError.
  std::optional<SampleGroup> next();

 private:
  struct Row {
    std::string sample_id;
    double x;
    std::vector<double> y;
    std::size_t line;
  };
  std::optional<Row> read_row();
  SampleGroup assemble(std::vector<Row>& rows);

  std::istream& in_;
  const ProcessModel& model_;
  std::size_t line_ = 0;
  bool header_seen_ = false;
  std::optional<Row> pending_;
  std::vector<std::string> finished_ids_;
};

void write_samples_header(std::ostream& out, std::size_t profiles);
void write_sample(std::ostream& out, std::string_view sample_id, const DesignPoints& design,
                  const SampleMatrix& y);

// ---------------------------------------------------------------------------
// Verdict stream (JSON lines).

struct MonitorRecord {
  std::string sample_id;
  std::uint64_t step = 0;
  ChartVerdict verdict;
  CoefSumVector z;
  CoefMatrix b_hat;
};

std::string to_jsonl(const MonitorRecord& record);
MonitorRecord parse_monitor_record(std::string_view line);

}  // namespace profmon::cli
