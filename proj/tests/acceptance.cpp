// Acceptance suite: one PASS/FAIL line per criterion.

#include "wavext/analysis.hpp"
#include "wavext/mesh.hpp"
#include "wavext/reference_tables.hpp"
#include "wavext/selftest.hpp"
#include "wavext/spacetime_system.hpp"
#include "wavext/temporal_hilbert.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace wavext;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Verdict table(const std::string& problem, std::vector<ConvergenceRow>& rows) {
  const ReferenceTable& ref = reference_table(problem);
  StudyConfig config;
  config.levels = ref.gating_rows;
  Verdict v;
  try {
    rows = run_study(problem_by_name(problem), config);
  } catch (const StudyError& e) {
    rows = e.partial();
    v.pass = false;
    v.detail = std::string("study failed: ") + e.what();
  }
  for (const RowVerdict& r : compare_with_reference(rows, ref)) {
    v.pass = v.pass && r.pass;
    if (!v.detail.empty()) v.detail += "\n    ";
    v.detail += "row " + std::to_string(r.level) + (r.pass ? " PASS  " : " FAIL  ") + r.detail;
  }
  if (static_cast<int>(rows.size()) < ref.gating_rows) v.pass = false;
  return v;
}

Verdict stability(const std::vector<ConvergenceRow>& rows) {
  Verdict v;
  const LevelResult first = run_level(problem_u1(), 1, StudyConfig{});
  v.pass = first.row.relative_residual <= 1e-10 && first.row.h_t_max / first.row.h_x_max >= 10.0;
  v.detail = fmt("level 1: h_t,max / h_x,max = %.1f, relative residual %.1e; ", first.row.h_t_max / first.row.h_x_max,
                 first.row.relative_residual);
  bool monotone = rows.size() >= 8;
  for (std::size_t i = 4; i < rows.size(); ++i) {
    monotone = monotone && rows[i].err_l2 < rows[i - 1].err_l2 && rows[i].err_h1 < rows[i - 1].err_h1;
  }
  v.pass = v.pass && monotone;
  v.detail += monotone ? "errors decrease monotonically from level 4 to 8" : "errors not monotone from level 4";
  return v;
}

Verdict suites(const std::vector<std::string>& names) {
  Verdict v;
  for (const std::string& name : names) {
    const SuiteResult r = run_selftest_suite(name);
    v.pass = v.pass && r.pass;
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += name + (r.pass ? " PASS: " : " FAIL: ") + r.detail;
  }
  return v;
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref) {
  return (a - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
}

Verdict oracle_equivalence() {
  Verdict v;
  constexpr double pi = std::numbers::pi;
  constexpr double catalan = 0.915965594177219015054603514932384110774;
  constexpr double zeta3 = 1.202056903159594285399738161511449990765;
  constexpr double beta4 = 0.988944551741105336108422176816657560504;
  const TemporalMatrices unit = assemble_temporal_matrices(TemporalMesh((Eigen::VectorXd(2) << 0.0, 1.0).finished()));
  const double closed = std::max(std::abs(unit.stiffness(0, 0) - 8.0 * catalan / (pi * pi)),
                                 std::abs(unit.mass(0, 0) - (14.0 * zeta3 / std::pow(pi, 3) - 32.0 * beta4 / std::pow(pi, 4))));
  v.pass = closed <= 1e-8;
  v.detail = fmt("single-element closed forms %.1e; ", closed);

  std::vector<TemporalMesh> meshes;
  const TemporalMesh t1 = initial_mesh_1d().second;
  const TemporalMesh t2 = initial_mesh_lshape().second;
  for (int level = 0; level < 3; ++level) meshes.push_back(refine_uniform(t1, level));
  for (int level = 0; level < 3; ++level) meshes.push_back(refine_uniform(t2, level));
  double worst = 0.0;
  Eigen::Index largest = 0;
  for (const TemporalMesh& mesh : meshes) {
    const TemporalMatrices s = assemble_temporal_matrices(mesh);
    const TemporalMatrices c = assemble_temporal_matrices_cpv(mesh);
    worst = std::max({worst, max_rel(s.mass, c.mass), max_rel(s.stiffness, c.stiffness), max_rel(s.moment, c.moment)});
    largest = std::max(largest, mesh.num_dofs());
  }
  v.pass = v.pass && worst <= 1e-6;
  v.detail += fmt("spectral vs CPV on %.0f meshes up to N_t = %.0f: %.1e (max-norm relative)",
                  static_cast<double>(meshes.size()), static_cast<double>(largest), worst);
  return v;
}

template <typename SpatialMesh>
double solver_gap(const ManufacturedProblem& p, const SpatialMesh& s, const TemporalMesh& t, std::string& sizes,
                  std::string& skipped) {
  const TemporalMatrices tm = assemble_temporal_matrices(t);
  const SpatialMatrices sm = assemble_spatial(s);
  const KroneckerSum sys = build_system(tm, sm);
  const SolverOptions opts;
  if (assembled_memory_estimate(sys) > opts.memory_budget) {
    skipped += (skipped.empty() ? "" : ",") + std::to_string(sys.size());
    return 0.0;
  }
  const Eigen::VectorXd rhs = assemble_load(project_piecewise_constant(p.source, s, t, 5), tm, sm);
  const SpaceTimeSolution a = solve_tensor(sys, rhs, opts);
  const SpaceTimeSolution b = solve_assembled(sys, rhs, opts);
  sizes += (sizes.empty() ? "" : ",") + std::to_string(sys.size());
  return (a.coefficients - b.coefficients).norm() / b.coefficients.norm();
}

Verdict solver_cross_validation() {
  Verdict v = suites({"solver-equivalence"});
  double worst = 0.0;
  std::string sizes, skipped;
  const auto [s1, t1] = initial_mesh_1d();
  for (int level = 0; level < 8; ++level) {
    worst = std::max(worst,
                     solver_gap(problem_u1(), refine_uniform(s1, level), refine_uniform(t1, level), sizes, skipped));
  }
  const auto [s2, t2] = initial_mesh_lshape();
  for (int level = 0; level < 4; ++level) {
    worst = std::max(worst,
                     solver_gap(problem_u2(), refine_uniform(s2, level), refine_uniform(t2, level), sizes, skipped));
  }
  v.pass = v.pass && worst <= 1e-10;
  v.detail += "; study systems (dof " + sizes + "): " + fmt("%.1e relative", worst) +
              "; over the 2 GB budget: dof " + (skipped.empty() ? "none" : skipped);
  return v;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const char* title, const Verdict& v, double seconds) {
    std::printf("criterion %d: %s  %s (%.1f s)\n", n, v.pass ? "PASS" : "FAIL", title, seconds);
    std::printf("    %s\n", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  };
  auto timed = [](auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = fn();
    return std::make_pair(v, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  };

  std::vector<ConvergenceRow> rows1, rows2;
  auto [v1, s1] = timed([&] { return table("u1", rows1); });
  report(1, "1D convergence table, levels 1-8", v1, s1);
  auto [v2, s2] = timed([&] { return table("u2", rows2); });
  report(2, "L-shape convergence table, levels 1-4", v2, s2);
  auto [v3, s3] = timed([&] { return stability(rows1); });
  report(3, "unconditional stability", v3, s3);
  auto [v4, s4] = timed([] { return suites({"hilbert-modes", "hilbert-unitarity"}); });
  report(4, "H_T operator identities", v4, s4);
  auto [v5, s5] = timed([] { return oracle_equivalence(); });
  report(5, "temporal matrices vs principal value quadrature", v5, s5);
  auto [v6, s6] = timed([] { return suites({"temporal-positivity", "spacetime-positivity"}); });
  report(6, "positivity", v6, s6);
  auto [v7, s7] = timed([] { return solver_cross_validation(); });
  report(7, "tensor vs assembled solver", v7, s7);
  auto [v8, s8] = timed([] { return suites({"fd-source"}); });
  report(8, "manufactured solutions vs finite differences", v8, s8);
  std::printf("%s\n", all ? "all criteria PASS" : "some criteria FAIL");
  return all ? 0 : 1;
}
