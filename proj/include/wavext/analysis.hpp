#pragma once

#include "wavext/mesh.hpp"
#include "wavext/quadrature.hpp"
#include "wavext/spacetime_system.hpp"
#include "wavext/spatial_fem.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavext {

enum class SpatialDomain { unit_interval, lshape };

/// Closed-form solution u of u_tt - Laplace u = f with homogeneous Dirichlet
/// and initial data. Points are passed as 2-vectors; 1D problems ignore x[1].
struct ManufacturedProblem {
  std::string name;
  int dim = 1;
  double horizon = 1.0;
  SpatialDomain domain = SpatialDomain::unit_interval;
  SpaceTimeFunction u;
  SpaceTimeFunction du_dt;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)> grad_x;
  SpaceTimeFunction source;
  /// Largest integration subcell that resolves the oscillations of u and f.
  double max_space_cell = std::numeric_limits<double>::infinity();
  double max_time_cell = std::numeric_limits<double>::infinity();
};

/// u1(x, t) = t^2 sin(10 pi x) sin(t x) on (0, 1) x (0, 10).
ManufacturedProblem problem_u1();
/// u2(x, t) = sin(pi x1) sin(pi x2) sin(t x1 x2)^2 on the L-shape x (0, 2).
ManufacturedProblem problem_u2();
/// "u1" or "u2".
ManufacturedProblem problem_by_name(const std::string& name);

CellQuadrature cell_quadrature(const ManufacturedProblem& problem, int quad_order);

struct SpaceTimeErrors {
  double l2 = 0.0;
  /// |u - u_h|_{H^1(Q)} = sqrt(||d_t(u - u_h)||^2 + ||grad_x(u - u_h)||^2)
  double h1 = 0.0;
};

/// Both error norms in one quadrature sweep; u_h is the piecewise
/// multilinear function with the solution's nodal coefficients.
SpaceTimeErrors space_time_errors(const SpaceTimeSolution& sol, const ManufacturedProblem& problem,
                                  const SpatialMesh1D& smesh, const TemporalMesh& tmesh, const CellQuadrature& quad);
SpaceTimeErrors space_time_errors(const SpaceTimeSolution& sol, const ManufacturedProblem& problem,
                                  const TriangleMesh& smesh, const TemporalMesh& tmesh, const CellQuadrature& quad);

template <typename SpatialMesh>
double error_l2(const SpaceTimeSolution& sol, const ManufacturedProblem& problem, const SpatialMesh& smesh,
                const TemporalMesh& tmesh, int quad_order) {
  return space_time_errors(sol, problem, smesh, tmesh, cell_quadrature(problem, quad_order)).l2;
}

template <typename SpatialMesh>
double error_h1_seminorm(const SpaceTimeSolution& sol, const ManufacturedProblem& problem, const SpatialMesh& smesh,
                         const TemporalMesh& tmesh, int quad_order) {
  return space_time_errors(sol, problem, smesh, tmesh, cell_quadrature(problem, quad_order)).h1;
}

/// log2(prev / curr); throws std::domain_error for non-positive errors.
double eoc(double prev_err, double curr_err);

struct ConvergenceRow {
  Eigen::Index dof = 0;
  Eigen::Index num_temporal = 0;
  Eigen::Index num_spatial = 0;
  double h_x_max = 0.0;
  double h_x_min = 0.0;  // equals h_x_max for triangle meshes
  double h_t_max = 0.0;
  double h_t_min = 0.0;
  double err_l2 = 0.0;
  std::optional<double> eoc_l2;
  double err_h1 = 0.0;
  std::optional<double> eoc_h1;
  SolverKind solver = SolverKind::tensor;
  double relative_residual = 0.0;
};

struct StudyConfig {
  int levels = 1;
  SolverOptions solver;
  /// Number of Fourier modes for the temporal matrices; default_truncation when unset.
  std::optional<Eigen::Index> hilbert_truncation;
  /// Gauss order of the error quadrature (on resolved subcells).
  int quad_order = 10;
  /// Gauss points per direction for the cell averages of f, applied once per
  /// space-time cell without subdivision. 0 uses the error quadrature instead.
  int source_order = 5;
};

/// Quadrature used for the cell averages of f under `config`.
CellQuadrature source_quadrature(const ManufacturedProblem& problem, const StudyConfig& config);

/// Thrown when a level fails; carries the rows completed before the failure.
class StudyError : public std::runtime_error {
 public:
  StudyError(const std::string& what, std::vector<ConvergenceRow> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const std::vector<ConvergenceRow>& partial() const { return partial_; }

 private:
  std::vector<ConvergenceRow> partial_;
};

/// Everything produced for one refinement level.
struct LevelResult {
  ConvergenceRow row;
  SpaceTimeSolution solution;
};

/// Assemble, solve and measure one level (1 = initial meshes) of the problem.
LevelResult run_level(const ManufacturedProblem& problem, int level, const StudyConfig& config);

/// Uniform refinement study over levels 1..config.levels. `on_row`, if
/// given, is called as each row completes.
std::vector<ConvergenceRow> run_study(const ManufacturedProblem& problem, const StudyConfig& config,
                                      const std::function<void(const ConvergenceRow&)>& on_row = {});

}  // namespace wavext
