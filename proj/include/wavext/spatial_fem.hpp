#pragma once

#include "wavext/mesh.hpp"
#include "wavext/quadrature.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>

namespace wavext {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 matrices on the interior (Dirichlet-free) vertices.
struct SpatialMatrices {
  SparseMatrix mass;       // M_x x M_x
  SparseMatrix stiffness;  // M_x x M_x
  /// moment(j, i) = int_{omega_i} psi_j, size M_x x N_x.
  SparseMatrix moment;

  Eigen::Index num_dofs() const { return mass.rows(); }
  Eigen::Index num_elements() const { return moment.cols(); }
};

SpatialMatrices assemble_spatial(const SpatialMesh1D& mesh);
SpatialMatrices assemble_spatial(const TriangleMesh& mesh);

/// Local P1 stiffness matrix of a triangle (vertex order as given), from the
/// constant gradients of the barycentric coordinates.
Eigen::Matrix3d local_stiffness(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);
/// Local P1 mass matrix |T|/12 (ones + identity).
Eigen::Matrix3d local_mass(double area);

/// Space-time field f(x, t); x has one or two components.
using SpaceTimeFunction = std::function<double(const Eigen::Vector2d& x, double t)>;

/// Cell averages of f over omega_i x (t_{l-1}, t_l), i.e. the L2 projection
/// onto piecewise constants, indexed (l-1) * N_x + i. Tensor Gauss rules
/// with `quad.order` points per direction on every integration subcell.
/// Throws std::domain_error on a non-finite value of f.
Eigen::VectorXd project_piecewise_constant(const SpaceTimeFunction& f, const SpatialMesh1D& smesh,
                                           const TemporalMesh& tmesh, const CellQuadrature& quad);
Eigen::VectorXd project_piecewise_constant(const SpaceTimeFunction& f, const TriangleMesh& smesh,
                                           const TemporalMesh& tmesh, const CellQuadrature& quad);

template <typename SpatialMesh>
Eigen::VectorXd project_piecewise_constant(const SpaceTimeFunction& f, const SpatialMesh& smesh,
                                           const TemporalMesh& tmesh, int quad_order) {
  return project_piecewise_constant(f, smesh, tmesh, CellQuadrature{quad_order});
}

/// Midpoint-subdivision depth that brings a triangle of circumradius h below max_h.
int subdivision_levels(double h, double max_h);

}  // namespace wavext
