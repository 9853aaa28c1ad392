#include "wavext/mesh.hpp"
#include "wavext/spatial_fem.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>

using namespace wavext;

namespace {

/// Barycentric coefficients (c0 + c1 x + c2 y per row) of the three vertex hats of a triangle.
Eigen::Matrix3d hat_coefficients(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  Eigen::Matrix3d v;
  v << 1, a.x(), a.y(), 1, b.x(), b.y(), 1, c.x(), c.y();
  return v.inverse().transpose();
}

double max_entry(const SparseMatrix& m) { return Eigen::MatrixXd(m).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("1D matrices match hat-function integrals by Gauss quadrature") {
  const SpatialMesh1D mesh = refine_uniform(initial_mesh_1d().first, 2);
  const SpatialMatrices m = assemble_spatial(mesh);
  const Eigen::Index n = mesh.num_interior();
  REQUIRE(m.num_dofs() == n);
  REQUIRE(m.num_elements() == mesh.num_elements());
  const Eigen::VectorXd& x = mesh.nodes();
  auto hat = [&](Eigen::Index j, double s) {  // interior hat j sits at node j + 1
    const double l = x[j], c = x[j + 1], r = x[j + 2];
    if (s <= l || s >= r) return 0.0;
    return s <= c ? (s - l) / (c - l) : (r - s) / (r - c);
  };
  auto dhat = [&](Eigen::Index j, double s) {
    const double l = x[j], c = x[j + 1], r = x[j + 2];
    if (s <= l || s >= r) return 0.0;
    return s <= c ? 1.0 / (c - l) : -1.0 / (r - c);
  };
  const Rule1D g = gauss_legendre(4);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n), stiff = mass, moment = Eigen::MatrixXd::Zero(n, mesh.num_elements());
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.element_size(e);
    for (Eigen::Index q = 0; q < g.size(); ++q) {
      const double s = x[e] + h * g.points[q], w = h * g.weights[q];
      for (Eigen::Index i = 0; i < n; ++i) {
        moment(i, e) += w * hat(i, s);
        for (Eigen::Index j = 0; j < n; ++j) {
          mass(i, j) += w * hat(i, s) * hat(j, s);
          stiff(i, j) += w * dhat(i, s) * dhat(j, s);
        }
      }
    }
  }
  CHECK((Eigen::MatrixXd(m.mass) - mass).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((Eigen::MatrixXd(m.stiffness) - stiff).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((Eigen::MatrixXd(m.moment) - moment).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("local P1 matrices") {
  const Eigen::Matrix3d k = local_stiffness({0, 0}, {1, 0}, {0, 1});
  Eigen::Matrix3d expected;
  expected << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  CHECK((k - expected).cwiseAbs().maxCoeff() <= 1e-15);
  // Invariance under rigid motion and scaling in 2D.
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;
  const Eigen::Vector2d shift(3.0, -2.0);
  const Eigen::Matrix3d k2 = local_stiffness(shift, rot * Eigen::Vector2d(5, 0) + shift, rot * Eigen::Vector2d(0, 5) + shift);
  CHECK((k2 - expected).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(k2.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-13);
  CHECK_THROWS_AS(local_stiffness({0, 0}, {0, 1}, {1, 0}), std::invalid_argument);
  const Eigen::Matrix3d m = local_mass(0.5);
  CHECK(m.sum() == doctest::Approx(0.5));
  CHECK(m(0, 0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("L-shape matrices match barycentric quadrature") {
  const TriangleMesh mesh = refine_uniform(initial_mesh_lshape().first);
  const SpatialMatrices m = assemble_spatial(mesh);
  const auto dof = interior_numbering(mesh.boundary());
  const Eigen::Index n = mesh.num_interior();
  const TriangleRule r = triangle_rule(3);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n), stiff = mass, moment = Eigen::MatrixXd::Zero(n, mesh.num_elements());
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    Eigen::Vector2d p[3];
    for (int k = 0; k < 3; ++k) p[k] = mesh.vertices().row(mesh.triangles()(e, k)).transpose();
    const Eigen::Matrix3d coef = hat_coefficients(p[0], p[1], p[2]);
    const double area = mesh.area(e);
    for (Eigen::Index q = 0; q < r.size(); ++q) {
      const Eigen::Vector2d y = p[0] + r.points(q, 0) * (p[1] - p[0]) + r.points(q, 1) * (p[2] - p[0]);
      const double w = area * r.weights[q];
      for (int a = 0; a < 3; ++a) {
        const Eigen::Index ga = dof[static_cast<std::size_t>(mesh.triangles()(e, a))];
        if (ga < 0) continue;
        const double va = coef(a, 0) + coef(a, 1) * y.x() + coef(a, 2) * y.y();
        moment(ga, e) += w * va;
        for (int b = 0; b < 3; ++b) {
          const Eigen::Index gb = dof[static_cast<std::size_t>(mesh.triangles()(e, b))];
          if (gb < 0) continue;
          const double vb = coef(b, 0) + coef(b, 1) * y.x() + coef(b, 2) * y.y();
          mass(ga, gb) += w * va * vb;
          stiff(ga, gb) += w * (coef(a, 1) * coef(b, 1) + coef(a, 2) * coef(b, 2));
        }
      }
    }
  }
  CHECK((Eigen::MatrixXd(m.mass) - mass).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((Eigen::MatrixXd(m.stiffness) - stiff).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((Eigen::MatrixXd(m.moment) - moment).cwiseAbs().maxCoeff() <= 1e-14);
  // Symmetric positive definite.
  CHECK((Eigen::MatrixXd(m.stiffness) - Eigen::MatrixXd(m.stiffness).transpose()).norm() == 0.0);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(m.stiffness)).info() == Eigen::Success);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(m.mass)).info() == Eigen::Success);
  CHECK(max_entry(m.stiffness) > 0.0);
}

TEST_CASE("stiffness rows of vertices away from the boundary sum to zero") {
  // Each row of the full (boundary-inclusive) stiffness sums to zero; for the
  // interior block that means rows of interior vertices away from the boundary sum to zero.
  const TriangleMesh mesh = refine_uniform(initial_mesh_lshape().first, 2);
  const SpatialMatrices m = assemble_spatial(mesh);
  const auto dof = interior_numbering(mesh.boundary());
  std::vector<bool> touches_boundary(static_cast<std::size_t>(mesh.num_interior()), false);
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    bool any_boundary = false;
    for (int k = 0; k < 3; ++k) any_boundary = any_boundary || mesh.boundary()[static_cast<std::size_t>(mesh.triangles()(e, k))];
    if (!any_boundary) continue;
    for (int k = 0; k < 3; ++k) {
      const Eigen::Index g = dof[static_cast<std::size_t>(mesh.triangles()(e, k))];
      if (g >= 0) touches_boundary[static_cast<std::size_t>(g)] = true;
    }
  }
  const Eigen::VectorXd row_sums = Eigen::MatrixXd(m.stiffness).rowwise().sum();
  int checked = 0;
  for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
    if (touches_boundary[static_cast<std::size_t>(i)]) continue;
    CHECK(std::abs(row_sums[i]) <= 1e-12);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("cell averages are exact for polynomials the rule integrates") {
  const auto [s1, t1] = initial_mesh_1d();
  const auto f1 = [](const Eigen::Vector2d& x, double t) { return x[0] * x[0] * t + 3.0 * t * t; };
  const Eigen::VectorXd avg = project_piecewise_constant(f1, s1, t1, 2);
  for (Eigen::Index l = 0; l < t1.num_elements(); ++l) {
    const double a = t1.nodes()[l], b = t1.nodes()[l + 1];
    for (Eigen::Index i = 0; i < s1.num_elements(); ++i) {
      const double c = s1.nodes()[i], d = s1.nodes()[i + 1];
      const double exact = (d * d * d - c * c * c) / 3.0 * (b * b - a * a) / 2.0 + (d - c) * (b * b * b - a * a * a);
      CHECK(avg[l * s1.num_elements() + i] * (b - a) * (d - c) == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  const auto [s2, t2] = initial_mesh_lshape();
  const auto f2 = [](const Eigen::Vector2d& x, double t) { return 1.0 + x[0] - 2.0 * x[1] + t; };
  const Eigen::VectorXd avg2 = project_piecewise_constant(f2, s2, t2, 2);
  for (Eigen::Index l = 0; l < t2.num_elements(); ++l) {
    const double tm = 0.5 * (t2.nodes()[l] + t2.nodes()[l + 1]);
    for (Eigen::Index i = 0; i < s2.num_elements(); ++i) {
      Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) centroid += s2.vertices().row(s2.triangles()(i, k)).transpose() / 3.0;
      CHECK(avg2[l * s2.num_elements() + i] == doctest::Approx(f2(centroid, tm)).epsilon(1e-13));
    }
  }
  // Subdivided rules give the same averages.
  CellQuadrature fine{2, 0.1, 0.3};
  CHECK((project_piecewise_constant(f1, s1, t1, fine) - avg).cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("projection rejects non-finite sources and bad orders") {
  const auto [s, t] = initial_mesh_1d();
  const auto bad = [](const Eigen::Vector2d&, double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(project_piecewise_constant(bad, s, t, 2), std::domain_error);
  CHECK_THROWS_AS(project_piecewise_constant([](const Eigen::Vector2d&, double) { return 1.0; }, s, t, 0),
                  std::invalid_argument);
}

TEST_CASE("subdivision_levels") {
  CHECK(subdivision_levels(1.0, std::numeric_limits<double>::infinity()) == 0);
  CHECK(subdivision_levels(1.0, 1.0) == 0);
  CHECK(subdivision_levels(1.0, 0.3) == 2);
  CHECK(subdivision_levels(0.35355, 0.5) == 0);
}
