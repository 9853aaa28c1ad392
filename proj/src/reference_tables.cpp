#include "wavext/reference_tables.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wavext {

const ReferenceTable& reference_table_u1() {
  static const ReferenceTable table = [] {
    ReferenceTable t;
    t.problem = "u1";
    t.rows = {
        {3, 0.7500, 0.2500, 7.5000, 1.2500, 5.0e+02, std::nullopt, 3.2e+03, std::nullopt},
        {18, 0.3750, 0.1250, 3.7500, 0.6250, 4.2e+02, 0.3, 2.7e+03, 0.2},
        {84, 0.1875, 0.0625, 1.8750, 0.3125, 3.2e+02, 0.4, 2.5e+03, 0.1},
        {360, 0.0938, 0.0312, 0.9375, 0.1562, 8.4e+01, 1.9, 2.1e+03, 0.2},
        {1488, 0.0469, 0.0156, 0.4688, 0.0781, 2.6e+01, 1.7, 1.0e+03, 1.0},
        {6048, 0.0234, 0.0078, 0.2344, 0.0391, 7.2e+00, 1.9, 5.0e+02, 1.1},
        {24384, 0.0117, 0.0039, 0.1172, 0.0195, 1.8e+00, 2.0, 2.5e+02, 1.0},
        {97920, 0.0059, 0.0020, 0.0586, 0.0098, 4.7e-01, 2.0, 1.2e+02, 1.0},
        {392448, 0.0029, 0.0010, 0.0293, 0.0049, 1.2e-01, 2.0, 6.2e+01, 1.0},
        {1571328, 0.0015, 0.0005, 0.0146, 0.0024, 2.9e-02, 2.0, 3.1e+01, 1.0},
    };
    t.error_tolerance.assign(t.rows.size(), 0.05);
    t.gating_rows = 8;
    return t;
  }();
  return table;
}

const ReferenceTable& reference_table_u2() {
  static const ReferenceTable table = [] {
    ReferenceTable t;
    t.problem = "u2";
    t.rows = {
        {20, 0.3536, 0.3536, 1.5000, 0.1250, 1.756e-01, std::nullopt, 1.331e+00, std::nullopt},
        {264, 0.1768, 0.1768, 0.7500, 0.0625, 6.370e-02, 1.5, 6.882e-01, 1.0},
        {2576, 0.0884, 0.0884, 0.3750, 0.0312, 1.903e-02, 1.7, 3.439e-01, 1.0},
        {22560, 0.0442, 0.0442, 0.1875, 0.0156, 5.206e-03, 1.9, 1.730e-01, 1.0},
        {188480, 0.0221, 0.0221, 0.0938, 0.0078, 1.306e-03, 2.0, 8.555e-02, 1.0},
        {1540224, 0.0110, 0.0110, 0.0469, 0.0039, 3.284e-04, 2.0, 4.268e-02, 1.0},
    };
    t.error_tolerance = {0.01, 0.01, 0.01, 0.01, 0.02, 0.02};
    t.gating_rows = 4;
    return t;
  }();
  return table;
}

const ReferenceTable& reference_table(const std::string& problem) {
  if (problem == "u1") return reference_table_u1();
  if (problem == "u2") return reference_table_u2();
  throw std::invalid_argument("no reference table for problem '" + problem + "'");
}

std::vector<RowVerdict> compare_with_reference(const std::vector<ConvergenceRow>& rows, const ReferenceTable& ref) {
  std::vector<RowVerdict> out;
  char buf[256];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RowVerdict v;
    v.level = static_cast<int>(i) + 1;
    if (i >= ref.rows.size()) {
      v.detail = "no reference row";
      out.push_back(v);
      continue;
    }
    const ConvergenceRow& r = rows[i];
    const ReferenceRow& p = ref.rows[i];
    const double tol = ref.error_tolerance[i];
    const double rel_l2 = std::abs(r.err_l2 - p.err_l2) / p.err_l2;
    const double rel_h1 = std::abs(r.err_h1 - p.err_h1) / p.err_h1;
    bool pass = r.dof == p.dof && rel_l2 <= tol && rel_h1 <= tol;
    double d_eoc_l2 = 0.0, d_eoc_h1 = 0.0;
    if (p.eoc_l2 && p.eoc_h1) {
      if (!r.eoc_l2 || !r.eoc_h1) {
        pass = false;
      } else {
        d_eoc_l2 = std::abs(*r.eoc_l2 - *p.eoc_l2);
        d_eoc_h1 = std::abs(*r.eoc_h1 - *p.eoc_h1);
        pass = pass && d_eoc_l2 <= ref.eoc_tolerance && d_eoc_h1 <= ref.eoc_tolerance;
      }
    }
    std::snprintf(buf, sizeof buf,
                  "dof %lld (ref %lld)  L2 %.4e vs %.3e (rel %.2e, tol %.0e)  H1 %.4e vs %.3e (rel %.2e)  "
                  "|d eoc| %.3f / %.3f",
                  static_cast<long long>(r.dof), p.dof, r.err_l2, p.err_l2, rel_l2, tol, r.err_h1, p.err_h1, rel_h1,
                  d_eoc_l2, d_eoc_h1);
    v.pass = pass;
    v.detail = buf;
    out.push_back(v);
  }
  return out;
}

}  // namespace wavext
