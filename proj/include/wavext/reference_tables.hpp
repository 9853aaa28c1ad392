#pragma once

#include "wavext/analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wavext {

/// One row of an embedded reference convergence table.
struct ReferenceRow {
  long long dof;
  double h_x_max;
  double h_x_min;
  double h_t_max;
  double h_t_min;
  double err_l2;
  std::optional<double> eoc_l2;
  double err_h1;
  std::optional<double> eoc_h1;
};

struct ReferenceTable {
  std::string problem;
  std::vector<ReferenceRow> rows;
  /// Relative tolerance on the errors, per row.
  std::vector<double> error_tolerance;
  /// Absolute tolerance on the printed EOCs.
  double eoc_tolerance = 0.1;
  /// Rows that must reproduce (the rest are extended runs).
  int gating_rows = 0;
};

/// 1D results for u1 (errors printed to 2 significant digits).
const ReferenceTable& reference_table_u1();
/// L-shape results for u2 (errors printed to 4 significant digits).
const ReferenceTable& reference_table_u2();
const ReferenceTable& reference_table(const std::string& problem);

struct RowVerdict {
  int level = 0;
  bool pass = false;
  std::string detail;
};

/// Compares computed rows with the reference row of the same level.
std::vector<RowVerdict> compare_with_reference(const std::vector<ConvergenceRow>& rows, const ReferenceTable& ref);

}  // namespace wavext
