#pragma once

#include "wavext/analysis.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wavext {

/// Column names of the CSV table; 2D tables omit h_x_min.
std::vector<std::string> csv_columns(int dim);

/// Header plus one line per row; values with 17 significant digits,
/// blank EOC cells on the first row.
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, int dim);

/// Inverse of write_csv. For 2D input h_x_min is set to h_x_max.
/// Throws std::runtime_error on a malformed table.
std::vector<ConvergenceRow> read_csv(std::istream& is, int dim);

/// Display table in the reference layout: mesh sizes with 4 decimals, errors
/// with `error_digits` significant digits, one-decimal EOCs.
void write_markdown(std::ostream& os, const std::vector<ConvergenceRow>& rows, int dim, int error_digits);

/// key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws std::runtime_error on malformed lines or keys outside `allowed`.
std::map<std::string, std::string> read_key_value_config(std::istream& is, const std::vector<std::string>& allowed);

}  // namespace wavext
