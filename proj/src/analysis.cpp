#include "wavext/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavext {

namespace {

/// Nodal values of u_h on all vertices and all time nodes t_0..t_N
/// (zero on the Dirichlet boundary and at t_0).
Eigen::MatrixXd nodal_values(const SpaceTimeSolution& sol, const std::vector<Eigen::Index>& dof,
                             Eigen::Index num_vertices, Eigen::Index num_time_nodes) {
  if (sol.num_temporal != num_time_nodes - 1 || sol.coefficients.size() != sol.num_temporal * sol.num_spatial) {
    throw std::invalid_argument("solution does not match the temporal mesh");
  }
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(num_vertices, num_time_nodes);
  for (Eigen::Index v = 0; v < num_vertices; ++v) {
    const Eigen::Index j = dof[static_cast<std::size_t>(v)];
    if (j < 0) continue;
    if (j >= sol.num_spatial) throw std::invalid_argument("solution does not match the spatial mesh");
    for (Eigen::Index l = 1; l < num_time_nodes; ++l) V(v, l) = sol.coefficients[(l - 1) * sol.num_spatial + j];
  }
  return V;
}

SpaceTimeErrors finish(double l2_sq, double h1_sq) { return {std::sqrt(l2_sq), std::sqrt(h1_sq)}; }

template <typename SpatialMesh>
std::pair<SpatialMesh, TemporalMesh> level_meshes(std::pair<SpatialMesh, TemporalMesh> initial, int level) {
  return {refine_uniform(initial.first, level - 1), refine_uniform(initial.second, level - 1)};
}

template <typename SpatialMesh>
LevelResult solve_level(const ManufacturedProblem& problem, const SpatialMesh& smesh, const TemporalMesh& tmesh,
                        const StudyConfig& config) {
  TemporalAssemblyOptions topts;
  topts.truncation = config.hilbert_truncation;
  const TemporalMatrices tmats = assemble_temporal_matrices(tmesh, topts);
  const SpatialMatrices smats = assemble_spatial(smesh);
  const KroneckerSum system = build_system(tmats, smats);
  const CellQuadrature quad = cell_quadrature(problem, config.quad_order);
  const Eigen::VectorXd load =
      assemble_load(project_piecewise_constant(problem.source, smesh, tmesh, source_quadrature(problem, config)),
                    tmats, smats);

  LevelResult result;
  result.solution = solve(system, load, config.solver);
  const SpaceTimeErrors err = space_time_errors(result.solution, problem, smesh, tmesh, quad);

  ConvergenceRow& row = result.row;
  row.num_temporal = tmesh.num_dofs();
  row.num_spatial = smats.num_dofs();
  row.dof = row.num_temporal * row.num_spatial;
  if constexpr (std::is_same_v<SpatialMesh, TriangleMesh>) {
    row.h_x_max = row.h_x_min = smesh.h_x();
  } else {
    row.h_x_max = smesh.h_max();
    row.h_x_min = smesh.h_min();
  }
  row.h_t_max = tmesh.h_max();
  row.h_t_min = tmesh.h_min();
  row.err_l2 = err.l2;
  row.err_h1 = err.h1;
  row.solver = result.solution.solver;
  row.relative_residual = result.solution.relative_residual;
  return result;
}

}  // namespace

SpaceTimeErrors space_time_errors(const SpaceTimeSolution& sol, const ManufacturedProblem& problem,
                                  const SpatialMesh1D& smesh, const TemporalMesh& tmesh, const CellQuadrature& quad) {
  const Eigen::MatrixXd V = nodal_values(sol, interior_numbering(smesh), smesh.nodes().size(), tmesh.nodes().size());
  CompositeRuleCache time_rules(quad.order), space_rules(quad.order);
  double l2 = 0.0, h1 = 0.0;
  for (Eigen::Index l = 0; l < tmesh.num_elements(); ++l) {
    const double t0 = tmesh.nodes()[l];
    const double ht = tmesh.element_size(l);
    const Rule1D& gt = time_rules.get(pieces_for(ht, quad.max_time_cell));
    for (Eigen::Index i = 0; i < smesh.num_elements(); ++i) {
      const double x0 = smesh.nodes()[i];
      const double hx = smesh.element_size(i);
      const Rule1D& gx = space_rules.get(pieces_for(hx, quad.max_space_cell));
      const double v00 = V(i, l), v10 = V(i + 1, l), v01 = V(i, l + 1), v11 = V(i + 1, l + 1);
      double cell_l2 = 0.0, cell_h1 = 0.0;
      for (Eigen::Index qt = 0; qt < gt.size(); ++qt) {
        const double tau = gt.points[qt];
        const double t = t0 + ht * tau;
        const double left = (1.0 - tau) * v00 + tau * v01;
        const double right = (1.0 - tau) * v10 + tau * v11;
        const double duh_dx = (right - left) / hx;
        for (Eigen::Index qx = 0; qx < gx.size(); ++qx) {
          const double xi = gx.points[qx];
          const Eigen::Vector2d x(x0 + hx * xi, 0.0);
          const double uh = (1.0 - xi) * left + xi * right;
          const double duh_dt = ((1.0 - xi) * (v01 - v00) + xi * (v11 - v10)) / ht;
          const double w = gt.weights[qt] * gx.weights[qx];
          const double e = problem.u(x, t) - uh;
          const double et = problem.du_dt(x, t) - duh_dt;
          const double ex = problem.grad_x(x, t)[0] - duh_dx;
          cell_l2 += w * e * e;
          cell_h1 += w * (et * et + ex * ex);
        }
      }
      l2 += hx * ht * cell_l2;
      h1 += hx * ht * cell_h1;
    }
  }
  return finish(l2, h1);
}

SpaceTimeErrors space_time_errors(const SpaceTimeSolution& sol, const ManufacturedProblem& problem,
                                  const TriangleMesh& smesh, const TemporalMesh& tmesh, const CellQuadrature& quad) {
  const Eigen::MatrixXd V = nodal_values(sol, interior_numbering(smesh.boundary()), smesh.num_vertices(),
                                         tmesh.nodes().size());
  CompositeRuleCache time_rules(quad.order);
  const TriangleRule r = composite_triangle_rule(quad.order, subdivision_levels(smesh.h_x(), quad.max_space_cell));
  const auto& vert = smesh.vertices();
  const auto& tri = smesh.triangles();

  double l2 = 0.0, h1 = 0.0;
  for (Eigen::Index i = 0; i < smesh.num_elements(); ++i) {
    const Eigen::Vector2d a = vert.row(tri(i, 0)).transpose();
    const Eigen::Vector2d b = vert.row(tri(i, 1)).transpose();
    const Eigen::Vector2d c = vert.row(tri(i, 2)).transpose();
    const double area = smesh.area(i);
    // Gradients of the barycentric coordinates (columns).
    Eigen::Matrix<double, 2, 3> grad;
    grad.col(0) = Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) / (2.0 * area);
    grad.col(1) = Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) / (2.0 * area);
    grad.col(2) = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / (2.0 * area);
    Eigen::Matrix<double, Eigen::Dynamic, 2> pts(r.size(), 2);
    Eigen::Matrix<double, Eigen::Dynamic, 3> bary(r.size(), 3);
    for (Eigen::Index q = 0; q < r.size(); ++q) {
      const double s = r.points(q, 0), u = r.points(q, 1);
      bary.row(q) << 1.0 - s - u, s, u;
      pts.row(q) = (a + s * (b - a) + u * (c - a)).transpose();
    }
    for (Eigen::Index l = 0; l < tmesh.num_elements(); ++l) {
      const double t0 = tmesh.nodes()[l];
      const double ht = tmesh.element_size(l);
      const Rule1D& gt = time_rules.get(pieces_for(ht, quad.max_time_cell));
      const Eigen::Vector3d v0(V(tri(i, 0), l), V(tri(i, 1), l), V(tri(i, 2), l));
      const Eigen::Vector3d v1(V(tri(i, 0), l + 1), V(tri(i, 1), l + 1), V(tri(i, 2), l + 1));
      const Eigen::Vector3d dv = (v1 - v0) / ht;
      double cell_l2 = 0.0, cell_h1 = 0.0;
      for (Eigen::Index qt = 0; qt < gt.size(); ++qt) {
        const double tau = gt.points[qt];
        const double t = t0 + ht * tau;
        const Eigen::Vector3d vt = (1.0 - tau) * v0 + tau * v1;
        const Eigen::Vector2d grad_uh = grad * vt;
        double inner_l2 = 0.0, inner_h1 = 0.0;
        for (Eigen::Index q = 0; q < r.size(); ++q) {
          const Eigen::Vector2d x = pts.row(q).transpose();
          const double e = problem.u(x, t) - bary.row(q).dot(vt);
          const double et = problem.du_dt(x, t) - bary.row(q).dot(dv);
          const Eigen::Vector2d ex = problem.grad_x(x, t) - grad_uh;
          inner_l2 += r.weights[q] * e * e;
          inner_h1 += r.weights[q] * (et * et + ex.squaredNorm());
        }
        cell_l2 += gt.weights[qt] * inner_l2;
        cell_h1 += gt.weights[qt] * inner_h1;
      }
      l2 += area * ht * cell_l2;
      h1 += area * ht * cell_h1;
    }
  }
  return finish(l2, h1);
}

CellQuadrature source_quadrature(const ManufacturedProblem& problem, const StudyConfig& config) {
  if (config.source_order < 0) throw std::invalid_argument("source_order must be >= 0");
  if (config.source_order == 0) return cell_quadrature(problem, config.quad_order);
  return CellQuadrature{config.source_order};
}

double eoc(double prev_err, double curr_err) {
  if (!(prev_err > 0.0) || !(curr_err > 0.0)) throw std::domain_error("eoc: errors must be positive");
  return std::log2(prev_err / curr_err);
}

LevelResult run_level(const ManufacturedProblem& problem, int level, const StudyConfig& config) {
  if (level < 1) throw std::invalid_argument("run_level: level must be >= 1");
  if (problem.dim == 1) {
    const auto [smesh, tmesh] = level_meshes(initial_mesh_1d(), level);
    if (tmesh.horizon() != problem.horizon) throw std::invalid_argument("problem horizon does not match the 1D meshes");
    return solve_level(problem, smesh, tmesh, config);
  }
  const auto [smesh, tmesh] = level_meshes(initial_mesh_lshape(), level);
  if (tmesh.horizon() != problem.horizon) throw std::invalid_argument("problem horizon does not match the 2D meshes");
  return solve_level(problem, smesh, tmesh, config);
}

std::vector<ConvergenceRow> run_study(const ManufacturedProblem& problem, const StudyConfig& config,
                                      const std::function<void(const ConvergenceRow&)>& on_row) {
  if (config.levels < 1) throw std::invalid_argument("run_study: levels must be >= 1");
  if (config.quad_order < 1) throw std::invalid_argument("run_study: quad_order must be >= 1");
  std::vector<ConvergenceRow> rows;
  for (int level = 1; level <= config.levels; ++level) {
    ConvergenceRow row;
    try {
      row = run_level(problem, level, config).row;
    } catch (const std::exception& e) {
      throw StudyError("level " + std::to_string(level) + ": " + e.what(), rows);
    }
    if (!rows.empty()) {
      row.eoc_l2 = eoc(rows.back().err_l2, row.err_l2);
      row.eoc_h1 = eoc(rows.back().err_h1, row.err_h1);
    }
    rows.push_back(row);
    if (on_row) on_row(rows.back());
  }
  return rows;
}

}  // namespace wavext
