#include "wavext/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wavext {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string sci(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", std::max(0, digits - 1), v);
  return buf;
}

std::string one_decimal(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<std::string> csv_columns(int dim) {
  if (dim == 1) return {"dof", "h_x_max", "h_x_min", "h_t_max", "h_t_min", "err_l2", "eoc_l2", "err_h1", "eoc_h1"};
  return {"dof", "h_x_max", "h_t_max", "h_t_min", "err_l2", "eoc_l2", "err_h1", "eoc_h1"};
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows, int dim) {
  const auto cols = csv_columns(dim);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const ConvergenceRow& r : rows) {
    os << r.dof << ',' << full(r.h_x_max) << ',';
    if (dim == 1) os << full(r.h_x_min) << ',';
    os << full(r.h_t_max) << ',' << full(r.h_t_min) << ',' << full(r.err_l2) << ','
       << (r.eoc_l2 ? full(*r.eoc_l2) : "") << ',' << full(r.err_h1) << ',' << (r.eoc_h1 ? full(*r.eoc_h1) : "")
       << '\n';
  }
}

std::vector<ConvergenceRow> read_csv(std::istream& is, int dim) {
  const auto cols = csv_columns(dim);
  std::string line;
  if (!std::getline(is, line) || split(trim(line), ',') != cols) throw std::runtime_error("csv: unexpected header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) throw std::runtime_error("csv: wrong number of cells in '" + line + "'");
    ConvergenceRow r;
    std::size_t c = 0;
    r.dof = static_cast<Eigen::Index>(std::stoll(cells[c++]));
    r.h_x_max = parse_double(cells[c++]);
    r.h_x_min = dim == 1 ? parse_double(cells[c++]) : r.h_x_max;
    r.h_t_max = parse_double(cells[c++]);
    r.h_t_min = parse_double(cells[c++]);
    r.err_l2 = parse_double(cells[c++]);
    if (!cells[c].empty()) r.eoc_l2 = parse_double(cells[c]);
    ++c;
    r.err_h1 = parse_double(cells[c++]);
    if (!cells[c].empty()) r.eoc_h1 = parse_double(cells[c]);
    rows.push_back(r);
  }
  return rows;
}

void write_markdown(std::ostream& os, const std::vector<ConvergenceRow>& rows, int dim, int error_digits) {
  if (dim == 1) {
    os << "| dof | h_x,max | h_x,min | h_t,max | h_t,min | L2 error | eoc | H1 error | eoc |\n"
          "|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  } else {
    os << "| dof | h_x | h_t,max | h_t,min | L2 error | eoc | H1 error | eoc |\n"
          "|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  }
  for (const ConvergenceRow& r : rows) {
    os << "| " << r.dof << " | " << fixed4(r.h_x_max) << " | ";
    if (dim == 1) os << fixed4(r.h_x_min) << " | ";
    os << fixed4(r.h_t_max) << " | " << fixed4(r.h_t_min) << " | " << sci(r.err_l2, error_digits) << " | "
       << one_decimal(r.eoc_l2) << " | " << sci(r.err_h1, error_digits) << " | " << one_decimal(r.eoc_h1) << " |\n";
  }
}

std::map<std::string, std::string> read_key_value_config(std::istream& is, const std::vector<std::string>& allowed) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::runtime_error("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw std::runtime_error("config line " + std::to_string(number) + ": empty value for '" + key + "'");
    out[key] = value;
  }
  return out;
}

}  // namespace wavext
