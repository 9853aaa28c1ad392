#include "wavext/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavext {

namespace {
constexpr double kPi = std::numbers::pi;
}

ManufacturedProblem problem_u1() {
  ManufacturedProblem p;
  p.name = "u1";
  p.dim = 1;
  p.horizon = 10.0;
  p.domain = SpatialDomain::unit_interval;
  p.u = [](const Eigen::Vector2d& x, double t) {
    return t * t * std::sin(10.0 * kPi * x[0]) * std::sin(t * x[0]);
  };
  p.du_dt = [](const Eigen::Vector2d& x, double t) {
    const double s = std::sin(10.0 * kPi * x[0]);
    return s * (2.0 * t * std::sin(t * x[0]) + t * t * x[0] * std::cos(t * x[0]));
  };
  p.grad_x = [](const Eigen::Vector2d& x, double t) {
    const double a = 10.0 * kPi * x[0];
    return Eigen::Vector2d(
        t * t * (10.0 * kPi * std::cos(a) * std::sin(t * x[0]) + t * std::sin(a) * std::cos(t * x[0])), 0.0);
  };
  p.source = [](const Eigen::Vector2d& x, double t) {
    const double a = 10.0 * kPi * x[0];
    const double sa = std::sin(a), ca = std::cos(a);
    const double stx = std::sin(t * x[0]), ctx = std::cos(t * x[0]);
    const double xx = x[0];
    const double u_tt = sa * (2.0 * stx + 4.0 * t * xx * ctx - t * t * xx * xx * stx);
    const double u_xx = t * t * (-(100.0 * kPi * kPi + t * t) * sa * stx + 20.0 * kPi * t * ca * ctx);
    return u_tt - u_xx;
  };
  // sin(10 pi x) and sin(t x) with t <= 10 oscillate at up to 10 pi + 10 rad per unit length.
  p.max_space_cell = 0.05;
  p.max_time_cell = 1.0;
  return p;
}

ManufacturedProblem problem_u2() {
  ManufacturedProblem p;
  p.name = "u2";
  p.dim = 2;
  p.horizon = 2.0;
  p.domain = SpatialDomain::lshape;
  p.u = [](const Eigen::Vector2d& x, double t) {
    const double s = std::sin(t * x[0] * x[1]);
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * s * s;
  };
  p.du_dt = [](const Eigen::Vector2d& x, double t) {
    const double q = x[0] * x[1];
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * q * std::sin(2.0 * t * q);
  };
  p.grad_x = [](const Eigen::Vector2d& x, double t) {
    const double q = x[0] * x[1];
    const double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
    const double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
    const double s = std::sin(t * q);
    const double s2tq = std::sin(2.0 * t * q);
    return Eigen::Vector2d(kPi * c1 * s2 * s * s + s1 * s2 * t * x[1] * s2tq,
                           kPi * s1 * c2 * s * s + s1 * s2 * t * x[0] * s2tq);
  };
  p.source = [](const Eigen::Vector2d& x, double t) {
    const double q = x[0] * x[1];
    const double s1 = std::sin(kPi * x[0]), c1 = std::cos(kPi * x[0]);
    const double s2 = std::sin(kPi * x[1]), c2 = std::cos(kPi * x[1]);
    const double s = std::sin(t * q);
    const double s2tq = std::sin(2.0 * t * q), c2tq = std::cos(2.0 * t * q);
    const double u_tt = 2.0 * s1 * s2 * q * q * c2tq;
    const double laplace = -2.0 * kPi * kPi * s1 * s2 * s * s +
                           2.0 * kPi * t * (c1 * s2 * x[1] + s1 * c2 * x[0]) * s2tq +
                           2.0 * s1 * s2 * t * t * (x[0] * x[0] + x[1] * x[1]) * c2tq;
    return u_tt - laplace;
  };
  p.max_space_cell = 0.5;
  p.max_time_cell = 0.5;
  return p;
}

ManufacturedProblem problem_by_name(const std::string& name) {
  if (name == "u1") return problem_u1();
  if (name == "u2") return problem_u2();
  throw std::invalid_argument("unknown problem '" + name + "' (expected u1 or u2)");
}

CellQuadrature cell_quadrature(const ManufacturedProblem& problem, int quad_order) {
  return CellQuadrature{quad_order, problem.max_space_cell, problem.max_time_cell};
}

}  // namespace wavext
