#pragma once

#include <optional>
#include <string>
#include <vector>

#include "profmon/simulate.hpp"

namespace profmon {

// One cell of a published run-length table for the two-profile reference
// model: the correlation, the one or two shift magnitudes, the scenario they
// define, and the published values.
struct TableCell {
  double rho = 0.0;
  double lambda1 = 0.0;
  std::optional<double> lambda2;
  ShiftScenario scenario;
  double published_arl = 0.0;
  // ARL of the earlier competing scheme, printed in parentheses in some
  // tables. Annotation only; never recomputed.
  std::optional<double> comparison_arl;
};

struct ReferenceTable {
  int id = 0;
  std::string description;
  std::string lambda1_label;
  std::string lambda2_label;  // empty for single-shift tables
  std::vector<double> rhos;
  std::vector<TableCell> cells;  // grouped by rho, in the rhos order

  std::vector<TableCell> cells_for(double rho) const;
};

inline constexpr int kFirstTable = 1;
inline constexpr int kLastTable = 8;

// Throws std::out_of_range for ids outside [1, 8].
const ReferenceTable& reference_table(int id);

}  // namespace profmon
