#include "cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "profmon/errors.hpp"

namespace profmon::cli {

using nlohmann::json;
using nlohmann::ordered_json;

InputError::InputError(const std::string& what, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what),
      line_(line) {}

namespace {

std::vector<double> number_array(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("missing key \"") + key + "\"");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw InputError(std::string("\"") + key + "\" must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

ProcessModel parse_model(const json& doc) {
  if (!doc.is_object()) throw InputError("model document must be a JSON object");
  auto x = number_array(doc, "x");
  CoefMatrix b{number_array(doc, "intercepts"), number_array(doc, "slopes")};
  if (!doc.contains("sigma") || !doc.at("sigma").is_array()) {
    throw InputError("\"sigma\" must be an array of arrays");
  }
  const auto& rows = doc.at("sigma");
  const auto p = rows.size();
  Eigen::MatrixXd sigma(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t u = 0; u < p; ++u) {
    const auto& row = rows[u];
    if (!row.is_array() || row.size() != p) throw InputError("\"sigma\" must be square");
    for (std::size_t v = 0; v < p; ++v) {
      if (!row[v].is_number()) throw InputError("\"sigma\" must contain numbers");
      sigma(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = row[v].get<double>();
    }
  }
  try {
    return build_model(std::move(x), std::move(b), std::move(sigma));
  } catch (const Error& e) {
    throw InputError(std::string("invalid model: ") + e.what());
  }
}

ProcessModel read_model(const std::filesystem::path& path) { return parse_model(load_json(path)); }

ordered_json model_to_json(const ProcessModel& model) {
  ordered_json doc;
  doc["x"] = std::vector<double>(model.design().x().begin(), model.design().x().end());
  doc["intercepts"] = model.coefficients().intercepts;
  doc["slopes"] = model.coefficients().slopes;
  const auto& s = model.covariance().matrix();
  auto rows = ordered_json::array();
  for (Eigen::Index u = 0; u < s.rows(); ++u) {
    auto row = ordered_json::array();
    for (Eigen::Index v = 0; v < s.cols(); ++v) row.push_back(s(u, v));
    rows.push_back(std::move(row));
  }
  doc["sigma"] = std::move(rows);
  return doc;
}

ShiftScenario parse_scenario(const json& doc, std::size_t profiles) {
  if (!doc.is_object()) throw InputError("scenario must be a JSON object");
  auto s = ShiftScenario::in_control(profiles);
  if (doc.contains("intercept_shifts")) s.intercept_shifts = number_array(doc, "intercept_shifts");
  if (doc.contains("slope_shifts")) s.slope_shifts = number_array(doc, "slope_shifts");
  if (doc.contains("stddev_factors")) s.stddev_factors = number_array(doc, "stddev_factors");
  try {
    s.validate(profiles);
  } catch (const std::exception& e) {
    throw InputError(std::string("invalid scenario: ") + e.what());
  }
  return s;
}

std::vector<ShiftScenario> read_scenarios(const std::filesystem::path& path,
                                          std::size_t profiles) {
  const auto doc = load_json(path);
  std::vector<ShiftScenario> out;
  if (doc.is_array()) {
    for (const auto& item : doc) out.push_back(parse_scenario(item, profiles));
  } else {
    out.push_back(parse_scenario(doc, profiles));
  }
  if (out.empty()) throw InputError(path.string() + ": no scenarios");
  return out;
}

std::string format_short(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw InputError("not a finite number: \"" + std::string(field) + "\"", line);
  }
  return v;
}

}  // namespace

SampleCsvReader::SampleCsvReader(std::istream& in, const ProcessModel& model)
    : in_(in), model_(model) {}

std::optional<SampleCsvReader::Row> SampleCsvReader::read_row() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv(text);
    const auto p = model_.profiles();
    if (!header_seen_) {
      header_seen_ = true;
      bool ok = fields.size() == p + 2 && fields[0] == "sample_id" && fields[1] == "x";
      for (std::size_t j = 0; ok && j < p; ++j) ok = fields[j + 2] == "y" + std::to_string(j + 1);
      if (!ok) {
        std::string expected = "sample_id,x";
        for (std::size_t j = 0; j < p; ++j) expected += ",y" + std::to_string(j + 1);
        throw InputError("header must be \"" + expected + "\"", line_);
      }
      continue;
    }
    if (fields.size() != p + 2) {
      throw InputError("expected " + std::to_string(p + 2) + " fields, found " +
                           std::to_string(fields.size()),
                       line_);
    }
    if (fields[0].empty()) throw InputError("empty sample_id", line_);
    Row row{std::string(fields[0]), parse_double(fields[1], line_), {}, line_};
    row.y.reserve(p);
    for (std::size_t j = 0; j < p; ++j) row.y.push_back(parse_double(fields[j + 2], line_));
    return row;
  }
  return std::nullopt;
}

SampleGroup SampleCsvReader::assemble(std::vector<Row>& rows) {
  const auto& design = model_.design();
  const auto n = design.size();
  const auto p = model_.profiles();
  if (rows.size() != n) {
    throw InputError("sample \"" + rows.front().sample_id + "\" has " +
                         std::to_string(rows.size()) + " rows, expected " + std::to_string(n),
                     rows.back().line);
  }
  SampleGroup g{rows.front().sample_id,
                SampleMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p))};
  std::vector<bool> used(n, false);
  for (const auto& row : rows) {
    std::size_t slot = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && design.x(i) == row.x) {
        slot = i;
        break;
      }
    }
    if (slot == n) {
      throw InputError("x = " + format_exact(row.x) + " does not match an unused design point",
                       row.line);
    }
    used[slot] = true;
    for (std::size_t j = 0; j < p; ++j) {
      g.y(static_cast<Eigen::Index>(slot), static_cast<Eigen::Index>(j)) = row.y[j];
    }
  }
  return g;
}

std::optional<SampleGroup> SampleCsvReader::next() {
  std::vector<Row> rows;
  if (pending_) {
    rows.push_back(std::move(*pending_));
    pending_.reset();
  } else if (auto first = read_row()) {
    rows.push_back(std::move(*first));
  } else {
    return std::nullopt;
  }
  const std::string id = rows.front().sample_id;
  if (std::find(finished_ids_.begin(), finished_ids_.end(), id) != finished_ids_.end()) {
    throw InputError("rows of sample \"" + id + "\" are not contiguous", rows.front().line);
  }
  while (auto row = read_row()) {
    if (row->sample_id != id) {
      pending_ = std::move(row);
      break;
    }
    if (rows.size() == model_.design().size()) {
      throw InputError("sample \"" + id + "\" has more than " +
                           std::to_string(model_.design().size()) + " rows",
                       row->line);
    }
    rows.push_back(std::move(*row));
  }
  finished_ids_.push_back(id);
  return assemble(rows);
}

void write_samples_header(std::ostream& out, std::size_t profiles) {
  out << "sample_id,x";
  for (std::size_t j = 0; j < profiles; ++j) out << ",y" << j + 1;
  out << '\n';
}

void write_sample(std::ostream& out, std::string_view sample_id, const DesignPoints& design,
                  const SampleMatrix& y) {
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    out << sample_id << ',' << format_exact(design.x(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < y.cols(); ++j) out << ',' << format_exact(y(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

std::string to_jsonl(const MonitorRecord& r) {
  ordered_json doc;
  doc["sample_id"] = r.sample_id;
  doc["step"] = r.step;
  doc["v"] = r.verdict.v;
  doc["limit"] = r.verdict.limit;
  doc["signal"] = r.verdict.signal;
  doc["worst_point"] = r.verdict.worst_point;
  doc["z0"] = r.z.b0_sum;
  doc["z1"] = r.z.b1_sum;
  doc["intercepts"] = r.b_hat.intercepts;
  doc["slopes"] = r.b_hat.slopes;
  return doc.dump();
}

MonitorRecord parse_monitor_record(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed verdict record: ") + e.what());
  }
  try {
    MonitorRecord r;
    r.sample_id = doc.at("sample_id").get<std::string>();
    r.step = doc.at("step").get<std::uint64_t>();
    r.verdict.v = doc.at("v").get<double>();
    r.verdict.limit = doc.at("limit").get<double>();
    r.verdict.signal = doc.at("signal").get<bool>();
    r.verdict.worst_point = doc.at("worst_point").get<std::size_t>();
    r.z.b0_sum = doc.at("z0").get<double>();
    r.z.b1_sum = doc.at("z1").get<double>();
    r.b_hat.intercepts = doc.at("intercepts").get<std::vector<double>>();
    r.b_hat.slopes = doc.at("slopes").get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed verdict record: ") + e.what());
  }
}

}  // namespace profmon::cli
