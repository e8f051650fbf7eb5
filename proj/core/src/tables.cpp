#include "profmon/tables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace profmon {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();
const std::vector<double> kRhos{0.1, 0.5, 0.9};

std::optional<double> maybe(double v) {
  return std::isnan(v) ? std::nullopt : std::optional<double>(v);
}

// Which coefficients a shift magnitude moves.
enum class Target { kIntercept1, kIntercept2, kSlope1, kSlope2, kStddev1, kStddev2 };

void apply(ShiftScenario& s, Target t, double lambda) {
  switch (t) {
    case Target::kIntercept1: s.intercept_shifts[0] = lambda; break;
    case Target::kIntercept2: s.intercept_shifts[1] = lambda; break;
    case Target::kSlope1: s.slope_shifts[0] = lambda; break;
    case Target::kSlope2: s.slope_shifts[1] = lambda; break;
    case Target::kStddev1: s.stddev_factors[0] = lambda; break;
    case Target::kStddev2: s.stddev_factors[1] = lambda; break;
  }
}

// published[r][k]: rho index r, lambda index k. comparison may be empty.
ReferenceTable single_shift(int id, std::string description, Target target,
                            std::vector<double> lambdas,
                            std::vector<std::vector<double>> published,
                            std::vector<std::vector<double>> comparison = {}) {
  ReferenceTable t;
  t.id = id;
  t.description = std::move(description);
  t.lambda1_label = "lambda";
  t.rhos = kRhos;
  for (std::size_t r = 0; r < kRhos.size(); ++r) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      TableCell c;
      c.rho = kRhos[r];
      c.lambda1 = lambdas[k];
      c.scenario = ShiftScenario::in_control(2);
      apply(c.scenario, target, lambdas[k]);
      c.published_arl = published[r][k];
      if (!comparison.empty()) c.comparison_arl = maybe(comparison[r][k]);
      t.cells.push_back(std::move(c));
    }
  }
  return t;
}

// One entry of a two-shift table: ARLs for rho = 0.1, 0.5, 0.9 and the
// optional comparison value printed once per cell.
struct Triple {
  double at_rho[3];
  double comparison = kNone;
};

ReferenceTable double_shift(int id, std::string description, Target first, Target second,
                            std::vector<double> lambda1, std::vector<double> lambda2,
                            std::vector<std::vector<Triple>> grid) {
  ReferenceTable t;
  t.id = id;
  t.description = std::move(description);
  t.lambda1_label = "lambda1";
  t.lambda2_label = "lambda2";
  t.rhos = kRhos;
  for (std::size_t r = 0; r < kRhos.size(); ++r) {
    for (std::size_t a = 0; a < lambda1.size(); ++a) {
      for (std::size_t b = 0; b < lambda2.size(); ++b) {
        TableCell c;
        c.rho = kRhos[r];
        c.lambda1 = lambda1[a];
        c.lambda2 = lambda2[b];
        c.scenario = ShiftScenario::in_control(2);
        apply(c.scenario, first, lambda1[a]);
        apply(c.scenario, second, lambda2[b]);
        c.published_arl = grid.at(a).at(b).at_rho[r];
        c.comparison_arl = maybe(grid[a][b].comparison);
        t.cells.push_back(std::move(c));
      }
    }
  }
  return t;
}

std::vector<ReferenceTable> build_tables() {
  std::vector<ReferenceTable> tables;
  const std::vector<double> mean_lambdas{0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};

  tables.push_back(single_shift(
      1, "intercept of profile 1 shifts by lambda * sigma_1", Target::kIntercept1, mean_lambdas,
      {{199.57, 198.06, 191.21, 127.63, 9.90, 1.21, 1.00, 1.00, 1.00, 1.00},
       {199.61, 198.64, 195.40, 180.54, 80.66, 6.64, 1.07, 1.00, 1.00, 1.00},
       {199.76, 198.93, 197.01, 190.67, 154.28, 39.75, 3.54, 1.03, 1.00, 1.00}},
      {{66.6, 19.17, 9.2, 5.9, 4.3, 3.5, 2.9, 2.5, 2.3, 2.0},
       {53.9, 14.4, 7.3, 4.9, 3.7, 3.0, 2.5, 2.2, 2.0, 1.9},
       {14.8, 4.9, 3.0, 2.2, 1.9, 1.6, 1.3, 1.0, 1.0, 1.0}}));

  tables.push_back(single_shift(
      2, "intercept of profile 2 shifts by lambda * sigma_1", Target::kIntercept2, mean_lambdas,
      {{199.54, 198.27, 191.16, 129.31, 10.50, 1.09, 1.00, 1.00, 1.00, 1.00},
       {199.82, 198.78, 195.60, 180.66, 78.91, 6.34, 1.28, 1.00, 1.00, 1.00},
       {199.55, 199.01, 197.13, 190.52, 154.56, 38.71, 3.36, 1.01, 1.00, 1.00}}));

  tables.push_back(single_shift(
      3, "slope of profile 1 shifts by lambda * sigma_1", Target::kSlope1,
      {0.025, 0.050, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25},
      {{199.87, 199.25, 198.00, 194.67, 182.22, 114.82, 21.28, 2.44, 1.03, 1.00},
       {199.92, 199.55, 198.48, 197.16, 192.62, 178.76, 116.16, 28.77, 4.29, 1.35},
       {200.11, 199.57, 198.76, 197.75, 195.78, 189.96, 171.01, 105.33, 29.86, 5.80}},
      {{108.5, 39.4, 17.7, 10.6, 7.4, 5.6, 4.6, 3.8, 3.4, 3.0},
       {91.0, 30.1, 13.9, 8.6, 6.1, 4.7, 3.9, 3.3, 2.9, 2.6},
       {30.2, 8.6, 4.8, 3.3, 2.6, 2.2, 2.0, 1.8, 1.6, 1.4}}));

  tables.push_back(double_shift(
      4, "intercepts of profiles 1 and 2 shift by lambda1 * sigma_1 and lambda2 * sigma_1",
      Target::kIntercept1, Target::kIntercept2, {0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6},
      {0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6},
      {{{{191.25, 195.50, 197.23}, 25.2}, {{186.11, 193.67, 196.10}},
        {{177.10, 191.54, 194.73}, 17.8}, {{159.71, 187.17, 193.18}},
        {{128.47, 180.20, 190.52}, 12.6}, {{84.91, 168.75, 186.37}},
        {{45.84, 148.55, 180.87}}},
       {{{186.26, 193.84, 196.20}}, {{176.93, 191.26, 195.00}}, {{160.05, 187.24, 192.71}},
        {{127.95, 180.30, 190.77}}, {{84.84, 169.32, 186.48}}, {{45.78, 148.81, 180.96}},
        {{22.21, 117.26, 170.47}}},
       {{{177.07, 191.53, 194.58}, 17.8}, {{159.55, 187.45, 192.95}},
        {{128.66, 180.50, 190.59}, 14.4}, {{84.78, 168.88, 186.43}},
        {{48.09, 148.76, 180.35}, 11.4}, {{22.66, 116.79, 171.08}},
        {{10.52, 80.54, 153.47}}},
       {{{159.12, 187.46, 193.08}}, {{128.30, 180.20, 190.63}}, {{86.01, 168.18, 187.06}},
        {{47.37, 147.88, 179.96}}, {{22.13, 117.51, 169.65}}, {{10.41, 81.18, 154.39}},
        {{3.93, 48.35, 127.34}}},
       {{{127.19, 179.94, 190.29}, 12.4}, {{86.94, 168.48, 186.39}},
        {{48.59, 147.67, 180.44}, 11.5}, {{22.45, 116.10, 170.11}},
        {{10.42, 80.98, 153.95}, 9.9}, {{4.69, 48.39, 128.47}},
        {{2.20, 25.10, 95.79}}},
       {{{86.66, 168.25, 186.76}}, {{47.47, 149.09, 180.64}}, {{23.51, 117.12, 170.52}},
        {{10.91, 80.54, 154.44}}, {{4.26, 48.31, 128.98}}, {{1.98, 25.59, 95.46}},
        {{1.43, 12.26, 63.64}}},
       {{{46.39, 147.21, 180.67}}, {{22.98, 116.98, 170.45}}, {{9.52, 79.79, 153.79}},
        {{4.30, 47.88, 129.32}}, {{2.30, 25.57, 96.41}}, {{1.24, 12.68, 65.37}},
        {{1.13, 6.66, 39.66}}}}));

  const std::vector<double> slope_lambdas{0.02, 0.04, 0.06, 0.08, 0.09, 0.1};
  tables.push_back(double_shift(
      5, "slopes of profiles 1 and 2 shift by lambda1 * sigma_1 and lambda2 * sigma_1",
      Target::kSlope1, Target::kSlope2, slope_lambdas, slope_lambdas,
      {{{{199.43, 199.55, 199.62}, 116.6}, {{198.78, 199.29, 199.48}, 58.6},
        {{197.50, 198.46, 198.82}, 26.9}, {{194.45, 197.22, 198.06}, 14.9},
        {{191.64, 195.86, 197.02}}, {{186.64, 193.68, 196.37}, 9.8}},
       {{{198.94, 199.36, 199.34}, 58.5}, {{197.42, 198.26, 198.76}, 45.3},
        {{194.82, 196.82, 197.92}, 27.0}, {{186.63, 194.01, 196.44}, 16.1},
        {{176.63, 191.45, 194.97}}, {{154.07, 186.79, 192.86}, 10.6}},
       {{{197.61, 198.49, 198.74}, 27.1}, {{194.87, 196.92, 197.90}, 26.9},
        {{186.87, 193.90, 196.45}, 21.4}, {{155.08, 186.44, 193.13}, 14.7},
        {{115.97, 178.52, 189.98}}, {{68.26, 163.28, 185.11}, 10.6}},
       {{{194.79, 197.16, 198.04}, 15.0}, {{186.73, 194.17, 196.35}, 16.3},
        {{154.61, 186.66, 192.91}, 15.0}, {{68.60, 162.14, 184.97}, 12.6},
        {{34.10, 135.80, 176.95}}, {{14.20, 96.25, 162.95}, 9.8}},
       {{{191.80, 195.88, 197.30}}, {{176.43, 191.28, 194.90}}, {{114.95, 178.04, 190.08}},
        {{33.09, 135.93, 177.04}}, {{13.90, 98.39, 162.40}}, {{5.84, 57.99, 138.38}}},
       {{{186.62, 194.19, 196.19}, 9.9}, {{154.37, 186.81, 192.94}, 10.5},
        {{68.13, 163.50, 185.24}, 10.6}, {{13.95, 97.14, 162.34}, 9.9},
        {{5.88, 56.97, 140.17}}, {{2.47, 28.75, 105.87}, 8.5}}}));

  tables.push_back(double_shift(
      6, "intercept and slope of profile 1 shift by lambda1 * sigma_1 and lambda2 * sigma_1",
      Target::kIntercept1, Target::kSlope1, {0.1, 0.2, 0.3, 0.4, 0.5},
      {0.02, 0.04, 0.06, 0.08, 0.1, 0.12, 0.14},
      {{{{199.55, 199.73, 199.72}, 51.4}, {{199.06, 199.16, 199.57}, 23.3},
        {{197.67, 198.52, 198.90}, 13.2}, {{195.43, 197.20, 197.99}, 8.9},
        {{188.32, 194.44, 196.38}, 6.7}, {{161.87, 187.69, 193.82}},
        {{81.73, 167.96, 186.43}}},
       {{{199.00, 199.10, 199.21}, 24.6}, {{197.94, 198.72, 198.87}, 13.8},
        {{195.45, 197.23, 198.07}, 9.3}, {{189.38, 194.85, 196.74}, 6.9},
        {{167.18, 189.08, 194.13}, 5.5}, {{93.85, 172.55, 187.73}},
        {{22.35, 116.93, 170.18}}},
       {{{197.86, 198.59, 198.95}, 14.6}, {{195.63, 197.34, 198.26}, 9.6},
        {{189.91, 195.23, 196.99}, 7.1}, {{171.23, 189.91, 194.38}, 5.6},
        {{103.96, 174.86, 188.56}, 4.6}, {{27.66, 125.06, 173.73}},
        {{4.00, 50.93, 132.28}}},
       {{{195.92, 197.57, 198.46}, 9.9}, {{190.62, 195.36, 196.88}, 7.2},
        {{174.07, 190.47, 194.44}, 5.7}, {{111.22, 176.77, 189.58}, 4.7},
        {{30.74, 131.95, 175.85}, 4.0}, {{5.90, 56.02, 139.58}},
        {{1.63, 13.31, 68.75}}},
       {{{191.10, 195.31, 197.09}, 7.3}, {{175.61, 190.78, 194.76}, 5.8},
        {{119.47, 178.27, 189.60}, 4.8}, {{38.05, 138.24, 177.94}, 4.1},
        {{6.83, 63.79, 143.12}, 3.6}, {{1.63, 16.28, 75.19}},
        {{1.04, 3.59, 24.88}}}}));

  tables.push_back(single_shift(
      7, "standard deviation of profile 1 shifts to lambda * sigma_1", Target::kStddev1,
      {1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0},
      {{197.31, 156.89, 112.36, 52.31, 12.34, 1.36, 1.13, 1.00, 1.00, 1.00},
       {198.30, 160.31, 112.31, 54.03, 13.61, 2.31, 1.26, 1.12, 1.00, 1.00},
       {199.30, 165.20, 114.96, 57.30, 14.31, 2.75, 1.65, 1.36, 1.10, 1.00}}));

  const std::vector<double> sd_lambdas{1.1, 1.2, 1.3, 1.4, 1.5};
  tables.push_back(double_shift(
      8, "standard deviations shift to lambda1 * sigma_1 and lambda2 * sigma_2",
      Target::kStddev1, Target::kStddev2, sd_lambdas, sd_lambdas,
      {{{{141.42, 152.31, 167.65}, 81.6}, {{68.12, 74.87, 80.31}, 55.5},
        {{33.21, 38.26, 43.91}, 39.1}, {{9.36, 12.32, 15.85}, 29.0},
        {{3.21, 4.59, 6.89}, 22.0}},
       {{{68.26, 74.78, 80.30}, 55.6}, {{33.96, 38.21, 44.31}, 41.9},
        {{9.39, 12.38, 15.78}, 31.9}, {{3.46, 4.56, 6.89}, 24.3},
        {{2.56, 3.56, 5.61}, 19.4}},
       {{{33.23, 38.13, 44.02}, 39.7}, {{9.32, 12.36, 15.23}, 32.5},
        {{3.31, 4.46, 6.90}, 25.3}, {{2.59, 3.26, 5.46}, 21.0},
        {{1.14, 1.88, 3.13}, 17.2}},
       {{{9.48, 12.45, 15.26}, 29.2}, {{3.29, 4.53, 6.82}, 24.3},
        {{2.65, 3.12, 5.56}, 20.4}, {{1.13, 1.89, 3.12}, 17.4},
        {{1.08, 1.61, 2.56}, 14.8}},
       {{{3.3364, 4.4531, 6.7826}, 22.2}, {{2.5614, 3.1278, 5.5316}, 19.5},
        {{1.1460, 1.8813, 3.1157}, 17.1}, {{1.0923, 1.5813, 2.5124}, 15.3},
        {{1.0112, 1.3643, 1.4516}, 13.0}}}));

  return tables;
}

}  // namespace

std::vector<TableCell> ReferenceTable::cells_for(double rho) const {
  std::vector<TableCell> out;
  for (const auto& c : cells) {
    if (c.rho == rho) out.push_back(c);
  }
  return out;
}

const ReferenceTable& reference_table(int id) {
  static const std::vector<ReferenceTable> tables = build_tables();
  if (id < kFirstTable || id > kLastTable) {
    throw std::out_of_range("no reference table " + std::to_string(id) + " (expected 1..8)");
  }
  return tables[static_cast<std::size_t>(id - kFirstTable)];
}

}  // namespace profmon
