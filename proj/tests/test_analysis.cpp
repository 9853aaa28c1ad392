#include "wavext/analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wavext;

namespace {

/// u = t * phi(x) with phi the hat at x = 1/4 on the mesh {0, 1/4, 1}, T = 1.
ManufacturedProblem hat_times_t() {
  ManufacturedProblem p;
  p.name = "hat";
  p.dim = 1;
  p.horizon = 1.0;
  auto phi = [](double x) { return x <= 0.25 ? x / 0.25 : (1.0 - x) / 0.75; };
  auto dphi = [](double x) { return x <= 0.25 ? 4.0 : -1.0 / 0.75; };
  p.u = [phi](const Eigen::Vector2d& x, double t) { return t * phi(x[0]); };
  p.du_dt = [phi](const Eigen::Vector2d& x, double) { return phi(x[0]); };
  p.grad_x = [dphi](const Eigen::Vector2d& x, double t) { return Eigen::Vector2d(t * dphi(x[0]), 0.0); };
  p.source = [](const Eigen::Vector2d&, double) { return 0.0; };
  return p;
}

/// u = t * x1 on the L-shape, T = 2.
ManufacturedProblem linear_on_lshape() {
  ManufacturedProblem p;
  p.name = "linear";
  p.dim = 2;
  p.horizon = 2.0;
  p.domain = SpatialDomain::lshape;
  p.u = [](const Eigen::Vector2d& x, double t) { return t * x[0]; };
  p.du_dt = [](const Eigen::Vector2d& x, double) { return x[0]; };
  p.grad_x = [](const Eigen::Vector2d&, double t) { return Eigen::Vector2d(t, 0.0); };
  p.source = [](const Eigen::Vector2d&, double) { return 0.0; };
  return p;
}

SpaceTimeSolution zero_solution(Eigen::Index nt, Eigen::Index mx) {
  SpaceTimeSolution s;
  s.num_temporal = nt;
  s.num_spatial = mx;
  s.coefficients = Eigen::VectorXd::Zero(nt * mx);
  return s;
}

}  // namespace

TEST_CASE("eoc is log2 of the error ratio") {
  CHECK(eoc(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(eoc(1.0, 1.0) == 0.0);
  CHECK(eoc(1.0, 2.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(eoc(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(eoc(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(eoc(std::nan(""), 1.0), std::domain_error);
}

TEST_CASE("error norms of the zero solution are the norms of u") {
  const ManufacturedProblem p = hat_times_t();
  const SpatialMesh1D s((Eigen::VectorXd(3) << 0.0, 0.25, 1.0).finished());
  const TemporalMesh t((Eigen::VectorXd(2) << 0.0, 1.0).finished());
  const SpaceTimeErrors e = space_time_errors(zero_solution(1, 1), p, s, t, CellQuadrature{4});
  // ||u||^2 = 1/3 * 1/3;  |u|^2 = 1/3 + 1/3 * (4 + 4/3)
  CHECK(e.l2 == doctest::Approx(std::sqrt(1.0 / 9.0)).epsilon(1e-13));
  CHECK(e.h1 == doctest::Approx(std::sqrt(19.0 / 9.0)).epsilon(1e-13));
}

TEST_CASE("a discrete solution equal to u has zero error") {
  const ManufacturedProblem p = hat_times_t();
  const SpatialMesh1D s((Eigen::VectorXd(3) << 0.0, 0.25, 1.0).finished());
  const TemporalMesh t((Eigen::VectorXd(3) << 0.0, 0.4, 1.0).finished());
  SpaceTimeSolution sol = zero_solution(2, 1);
  sol.coefficients << 0.4, 1.0;
  const SpaceTimeErrors e = space_time_errors(sol, p, s, t, CellQuadrature{4});
  CHECK(e.l2 <= 1e-14);
  CHECK(e.h1 <= 1e-13);
}

TEST_CASE("L-shape error integration is exact for polynomials") {
  const ManufacturedProblem p = linear_on_lshape();
  const auto [s, t] = initial_mesh_lshape();
  const SpaceTimeErrors e = space_time_errors(zero_solution(t.num_dofs(), s.num_interior()), p, s, t, CellQuadrature{3});
  // int x1^2 over the L-shape is 1, its area 3.
  CHECK(e.l2 == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-13));
  CHECK(e.h1 == doctest::Approx(std::sqrt(2.0 + 8.0)).epsilon(1e-13));
}

TEST_CASE("mismatched solutions are rejected") {
  const ManufacturedProblem p = hat_times_t();
  const SpatialMesh1D s((Eigen::VectorXd(3) << 0.0, 0.25, 1.0).finished());
  const TemporalMesh t((Eigen::VectorXd(2) << 0.0, 1.0).finished());
  CHECK_THROWS_AS(space_time_errors(zero_solution(2, 1), p, s, t, CellQuadrature{4}), std::invalid_argument);
  CHECK_THROWS_AS(space_time_errors(zero_solution(1, 0), p, s, t, CellQuadrature{4}), std::invalid_argument);
}

TEST_CASE("manufactured problems vanish on the boundary and at t = 0") {
  const ManufacturedProblem u1 = problem_u1();
  CHECK(u1.dim == 1);
  CHECK(u1.horizon == 10.0);
  for (double t : {0.5, 3.0, 9.9}) {
    CHECK(std::abs(u1.u(Eigen::Vector2d(0.0, 0.0), t)) <= 1e-15);
    CHECK(std::abs(u1.u(Eigen::Vector2d(1.0, 0.0), t)) <= 1e-12);
  }
  CHECK(u1.u(Eigen::Vector2d(0.3, 0.0), 0.0) == 0.0);
  CHECK(u1.du_dt(Eigen::Vector2d(0.3, 0.0), 0.0) == 0.0);

  const ManufacturedProblem u2 = problem_u2();
  CHECK(u2.dim == 2);
  CHECK(u2.horizon == 2.0);
  CHECK(u2.domain == SpatialDomain::lshape);
  for (const Eigen::Vector2d& x : {Eigen::Vector2d(-1.0, 0.3), Eigen::Vector2d(0.5, 1.0), Eigen::Vector2d(0.0, -0.5),
                                   Eigen::Vector2d(0.5, 0.0)}) {
    CHECK(std::abs(u2.u(x, 1.3)) <= 1e-15);
  }
  CHECK(u2.u(Eigen::Vector2d(0.3, 0.4), 0.0) == 0.0);
  CHECK(problem_by_name("u2").name == "u2");
  CHECK_THROWS_AS(problem_by_name("u3"), std::invalid_argument);
}

TEST_CASE("u1 derivatives match an independent closed form") {
  const ManufacturedProblem p = problem_u1();
  const double pi = std::numbers::pi;
  const double x = 0.37, t = 4.2;
  const double s10 = std::sin(10 * pi * x), c10 = std::cos(10 * pi * x);
  const double stx = std::sin(t * x), ctx = std::cos(t * x);
  const double ut = 2 * t * s10 * stx + t * t * x * s10 * ctx;
  const double ux = t * t * (10 * pi * c10 * stx + t * s10 * ctx);
  const double utt = 2 * s10 * stx + 4 * t * x * s10 * ctx - t * t * x * x * s10 * stx;
  const double uxx = t * t * (-100 * pi * pi * s10 * stx + 20 * pi * t * c10 * ctx - t * t * s10 * stx);
  const Eigen::Vector2d pt(x, 0.0);
  CHECK(p.du_dt(pt, t) == doctest::Approx(ut).epsilon(1e-12));
  CHECK(p.grad_x(pt, t)[0] == doctest::Approx(ux).epsilon(1e-12));
  CHECK(p.source(pt, t) == doctest::Approx(utt - uxx).epsilon(1e-12));
}

TEST_CASE("source quadrature selection") {
  const ManufacturedProblem p = problem_u1();
  StudyConfig c;
  CHECK(source_quadrature(p, c).order == 5);
  CHECK(std::isinf(source_quadrature(p, c).max_space_cell));
  c.source_order = 0;
  const CellQuadrature q = source_quadrature(p, c);
  CHECK(q.order == c.quad_order);
  CHECK(q.max_space_cell == cell_quadrature(p, c.quad_order).max_space_cell);
  c.source_order = -1;
  CHECK_THROWS_AS(source_quadrature(p, c), std::invalid_argument);
}

TEST_CASE("initial 1D level: dimensions and stability") {
  const LevelResult r = run_level(problem_u1(), 1, StudyConfig{});
  CHECK(r.row.dof == 3);
  CHECK(r.row.num_temporal == 3);
  CHECK(r.row.num_spatial == 1);
  CHECK(r.row.h_x_max == 0.75);
  CHECK(r.row.h_x_min == 0.25);
  CHECK(r.row.h_t_max == 7.5);
  CHECK(r.row.h_t_min == 1.25);
  CHECK(r.row.relative_residual <= 1e-10);
  CHECK(std::isfinite(r.row.err_l2));
  CHECK_THROWS_AS(run_level(problem_u1(), 0, StudyConfig{}), std::invalid_argument);
}

TEST_CASE("initial L-shape level") {
  const LevelResult r = run_level(problem_u2(), 1, StudyConfig{});
  CHECK(r.row.dof == 20);
  CHECK(r.row.h_x_max == doctest::Approx(std::sqrt(2.0) / 4.0));
  CHECK(r.row.h_x_min == r.row.h_x_max);
  CHECK(r.row.h_t_max == 1.5);
  CHECK(r.row.h_t_min == 0.125);
}

TEST_CASE("a horizon that does not match the meshes is rejected") {
  ManufacturedProblem p = problem_u1();
  p.horizon = 2.0;
  CHECK_THROWS_AS(run_level(p, 1, StudyConfig{}), std::invalid_argument);
}

TEST_CASE("study rows, eocs and callback") {
  StudyConfig c;
  c.levels = 3;
  int calls = 0;
  const auto rows = run_study(problem_u1(), c, [&](const ConvergenceRow&) { ++calls; });
  CHECK(calls == 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].dof == 3);
  CHECK(rows[1].dof == 18);
  CHECK(rows[2].dof == 84);
  CHECK_FALSE(rows[0].eoc_l2.has_value());
  REQUIRE(rows[2].eoc_h1.has_value());
  CHECK(*rows[2].eoc_l2 == doctest::Approx(std::log2(rows[1].err_l2 / rows[2].err_l2)));
  CHECK(*rows[2].eoc_h1 == doctest::Approx(std::log2(rows[1].err_h1 / rows[2].err_h1)));

  const auto again = run_study(problem_u1(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].err_l2 == rows[i].err_l2);
    CHECK(again[i].err_h1 == rows[i].err_h1);
  }
  c.levels = 0;
  CHECK_THROWS_AS(run_study(problem_u1(), c), std::invalid_argument);
  c.levels = 1;
  c.quad_order = 0;
  CHECK_THROWS_AS(run_study(problem_u1(), c), std::invalid_argument);
}

TEST_CASE("a failing level keeps the completed rows") {
  StudyConfig c;
  c.levels = 3;
  c.solver.kind = SolverKind::assembled;
  c.solver.memory_budget = 1;
  try {
    run_study(problem_u1(), c);
    FAIL("expected StudyError");
  } catch (const StudyError& e) {
    CHECK(e.partial().empty());
    CHECK(std::string(e.what()).find("level 1") == 0);
  }

  // Budget that admits level 1 but not level 2.
  const auto [s, t] = initial_mesh_1d();
  const KroneckerSum level1 = build_system(assemble_temporal_matrices(t), assemble_spatial(s));
  c.solver.memory_budget = assembled_memory_estimate(level1);
  try {
    run_study(problem_u1(), c);
    FAIL("expected StudyError");
  } catch (const StudyError& e) {
    REQUIRE(e.partial().size() == 1);
    CHECK(e.partial()[0].dof == 3);
    CHECK(e.partial()[0].solver == SolverKind::assembled);
  }
}
