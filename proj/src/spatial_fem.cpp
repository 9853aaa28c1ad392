#include "wavext/spatial_fem.hpp"

#include "wavext/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavext {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void require_quad_order(int quad_order) {
  if (quad_order < 1) throw std::invalid_argument("quadrature order must be >= 1");
}

double checked(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite source value encountered");
  return v;
}

}  // namespace

SpatialMatrices assemble_spatial(const SpatialMesh1D& mesh) {
  const Eigen::Index m = mesh.num_interior();
  if (m < 1) throw std::invalid_argument("assemble_spatial: mesh has no interior nodes");
  const auto dof = interior_numbering(mesh);
  Triplets mass, stiff, moment;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.element_size(e);
    const Eigen::Index ends[2] = {dof[static_cast<std::size_t>(e)], dof[static_cast<std::size_t>(e + 1)]};
    for (int a = 0; a < 2; ++a) {
      if (ends[a] < 0) continue;
      moment.emplace_back(ends[a], e, 0.5 * h);
      for (int b = 0; b < 2; ++b) {
        if (ends[b] < 0) continue;
        mass.emplace_back(ends[a], ends[b], (a == b ? 2.0 : 1.0) * h / 6.0);
        stiff.emplace_back(ends[a], ends[b], (a == b ? 1.0 : -1.0) / h);
      }
    }
  }
  return {from_triplets(m, m, mass), from_triplets(m, m, stiff), from_triplets(m, mesh.num_elements(), moment)};
}

Eigen::Matrix3d local_stiffness(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  // grad lambda_i = rot90(opposite edge) / (2 |T|)
  Eigen::Matrix<double, 2, 3> edges;
  edges.col(0) = c - b;
  edges.col(1) = a - c;
  edges.col(2) = b - a;
  const double area = 0.5 * ((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y());
  if (!(area > 0.0)) throw std::invalid_argument("local_stiffness: degenerate or negatively oriented triangle");
  return (edges.transpose() * edges) / (4.0 * area);
}

Eigen::Matrix3d local_mass(double area) {
  return area / 12.0 * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
}

SpatialMatrices assemble_spatial(const TriangleMesh& mesh) {
  const Eigen::Index m = mesh.num_interior();
  if (m < 1) throw std::invalid_argument("assemble_spatial: mesh has no interior vertices");
  const auto dof = interior_numbering(mesh.boundary());
  const auto& v = mesh.vertices();
  const auto& tri = mesh.triangles();
  Triplets mass, stiff, moment;
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    const double area = mesh.area(e);
    const Eigen::Matrix3d ke = local_stiffness(v.row(tri(e, 0)).transpose(), v.row(tri(e, 1)).transpose(),
                                               v.row(tri(e, 2)).transpose());
    const Eigen::Matrix3d me = local_mass(area);
    for (int a = 0; a < 3; ++a) {
      const Eigen::Index ga = dof[static_cast<std::size_t>(tri(e, a))];
      if (ga < 0) continue;
      moment.emplace_back(ga, e, area / 3.0);
      for (int b = 0; b < 3; ++b) {
        const Eigen::Index gb = dof[static_cast<std::size_t>(tri(e, b))];
        if (gb < 0) continue;
        mass.emplace_back(ga, gb, me(a, b));
        stiff.emplace_back(ga, gb, ke(a, b));
      }
    }
  }
  return {from_triplets(m, m, mass), from_triplets(m, m, stiff), from_triplets(m, mesh.num_elements(), moment)};
}

int subdivision_levels(double h, double max_h) {
  int levels = 0;
  while (std::isfinite(max_h) && h > max_h * (1.0 + 1e-12)) {
    h *= 0.5;
    ++levels;
  }
  return levels;
}

Eigen::VectorXd project_piecewise_constant(const SpaceTimeFunction& f, const SpatialMesh1D& smesh,
                                           const TemporalMesh& tmesh, const CellQuadrature& quad) {
  require_quad_order(quad.order);
  CompositeRuleCache time_rules(quad.order), space_rules(quad.order);
  const Eigen::Index nx = smesh.num_elements();
  Eigen::VectorXd out(nx * tmesh.num_elements());
  for (Eigen::Index l = 0; l < tmesh.num_elements(); ++l) {
    const double t0 = tmesh.nodes()[l];
    const double ht = tmesh.element_size(l);
    const Rule1D& gt = time_rules.get(pieces_for(ht, quad.max_time_cell));
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double x0 = smesh.nodes()[i];
      const double hx = smesh.element_size(i);
      const Rule1D& gx = space_rules.get(pieces_for(hx, quad.max_space_cell));
      double s = 0.0;
      for (Eigen::Index qt = 0; qt < gt.size(); ++qt) {
        const double t = t0 + ht * gt.points[qt];
        double inner = 0.0;
        for (Eigen::Index qx = 0; qx < gx.size(); ++qx) {
          inner += gx.weights[qx] * checked(f(Eigen::Vector2d(x0 + hx * gx.points[qx], 0.0), t));
        }
        s += gt.weights[qt] * inner;
      }
      out[l * nx + i] = s;
    }
  }
  return out;
}

Eigen::VectorXd project_piecewise_constant(const SpaceTimeFunction& f, const TriangleMesh& smesh,
                                           const TemporalMesh& tmesh, const CellQuadrature& quad) {
  require_quad_order(quad.order);
  CompositeRuleCache time_rules(quad.order);
  const TriangleRule r = composite_triangle_rule(quad.order, subdivision_levels(smesh.h_x(), quad.max_space_cell));
  const Eigen::Index nx = smesh.num_elements();
  const auto& v = smesh.vertices();
  const auto& tri = smesh.triangles();

  // Physical quadrature points per triangle, reused for every time cell.
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> points(static_cast<std::size_t>(nx));
  for (Eigen::Index i = 0; i < nx; ++i) {
    const Eigen::RowVector2d a = v.row(tri(i, 0));
    const Eigen::RowVector2d b = v.row(tri(i, 1));
    const Eigen::RowVector2d c = v.row(tri(i, 2));
    auto& p = points[static_cast<std::size_t>(i)];
    p.resize(r.size(), 2);
    for (Eigen::Index q = 0; q < r.size(); ++q) p.row(q) = a + r.points(q, 0) * (b - a) + r.points(q, 1) * (c - a);
  }

  Eigen::VectorXd out(nx * tmesh.num_elements());
  for (Eigen::Index l = 0; l < tmesh.num_elements(); ++l) {
    const double t0 = tmesh.nodes()[l];
    const double ht = tmesh.element_size(l);
    const Rule1D& gt = time_rules.get(pieces_for(ht, quad.max_time_cell));
    for (Eigen::Index i = 0; i < nx; ++i) {
      const auto& p = points[static_cast<std::size_t>(i)];
      double s = 0.0;
      for (Eigen::Index qt = 0; qt < gt.size(); ++qt) {
        const double t = t0 + ht * gt.points[qt];
        double inner = 0.0;
        for (Eigen::Index q = 0; q < r.size(); ++q) {
          inner += r.weights[q] * checked(f(p.row(q).transpose(), t));
        }
        s += gt.weights[qt] * inner;
      }
      out[l * nx + i] = s;
    }
  }
  return out;
}

}  // namespace wavext
