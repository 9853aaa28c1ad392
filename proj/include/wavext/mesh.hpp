#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wavext {

/// Decomposition 0 = t_0 < t_1 < ... < t_N = T of the time interval.
/// Temporal degrees of freedom sit at t_1..t_N; t_0 carries the initial condition.
class TemporalMesh {
 public:
  explicit TemporalMesh(Eigen::VectorXd nodes);

  const Eigen::VectorXd& nodes() const { return nodes_; }
  double horizon() const { return nodes_[nodes_.size() - 1]; }
  /// Number of elements, which equals the number of temporal dofs.
  Eigen::Index num_elements() const { return nodes_.size() - 1; }
  Eigen::Index num_dofs() const { return num_elements(); }
  double element_size(Eigen::Index l) const { return nodes_[l + 1] - nodes_[l]; }
  double h_max() const;
  double h_min() const;

 private:
  Eigen::VectorXd nodes_;
};

/// P1 interval mesh with Dirichlet conditions at both endpoints.
class SpatialMesh1D {
 public:
  explicit SpatialMesh1D(Eigen::VectorXd nodes);

  const Eigen::VectorXd& nodes() const { return nodes_; }
  Eigen::Index num_elements() const { return nodes_.size() - 1; }
  Eigen::Index num_interior() const { return nodes_.size() - 2; }
  double element_size(Eigen::Index i) const { return nodes_[i + 1] - nodes_[i]; }
  double h_max() const;
  double h_min() const;

 private:
  Eigen::VectorXd nodes_;
};

using Vertices2D = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Triangles = Eigen::Matrix<int, Eigen::Dynamic, 3>;

/// Conforming, positively oriented triangulation with per-vertex boundary flags.
class TriangleMesh {
 public:
  TriangleMesh(Vertices2D vertices, Triangles triangles, std::vector<bool> boundary);

  const Vertices2D& vertices() const { return vertices_; }
  const Triangles& triangles() const { return triangles_; }
  const std::vector<bool>& boundary() const { return boundary_; }
  Eigen::Index num_vertices() const { return vertices_.rows(); }
  Eigen::Index num_elements() const { return triangles_.rows(); }
  Eigen::Index num_interior() const;
  double area(Eigen::Index e) const;
  double total_area() const;
  /// Largest circumradius over all triangles.
  double h_x() const;

 private:
  Vertices2D vertices_;
  Triangles triangles_;
  std::vector<bool> boundary_;
};

/// Numbering of the interior (non-Dirichlet) vertices, -1 for boundary vertices.
std::vector<Eigen::Index> interior_numbering(const std::vector<bool>& boundary);
std::vector<Eigen::Index> interior_numbering(const SpatialMesh1D& mesh);

std::pair<SpatialMesh1D, TemporalMesh> initial_mesh_1d();

/// Diagonal splitting each square of the L-shape grid: rising joins
/// lower-left to upper-right, falling joins lower-right to upper-left.
/// mirrored uses rising in the quadrant x < 0 < y and falling elsewhere, so
/// the pattern is symmetric under reflection in both axes and no diagonal
/// ends at the re-entrant corner.
enum class LShapeDiagonal { rising, falling, mirrored };

/// L-shape (-1,1)^2 minus [0,1]x[-1,0] with 24 right triangles of leg 1/2.
TriangleMesh lshape_mesh(LShapeDiagonal diagonal);
std::pair<TriangleMesh, TemporalMesh> initial_mesh_lshape();

TemporalMesh refine_uniform(const TemporalMesh& mesh);
SpatialMesh1D refine_uniform(const SpatialMesh1D& mesh);
/// Red refinement: every triangle is split into four via its edge midpoints.
TriangleMesh refine_uniform(const TriangleMesh& mesh);

template <typename Mesh>
Mesh refine_uniform(const Mesh& mesh, int times) {
  Mesh out = mesh;
  for (int i = 0; i < times; ++i) out = refine_uniform(out);
  return out;
}

// Plain-text mesh format "wavext-mesh v1 <dim>".
void write_mesh(std::ostream& os, const SpatialMesh1D& mesh);
void write_mesh(std::ostream& os, const TriangleMesh& mesh);
void write_mesh(std::ostream& os, const TemporalMesh& mesh);
SpatialMesh1D read_mesh_1d(std::istream& is);
TriangleMesh read_mesh_2d(std::istream& is);
TemporalMesh read_mesh_temporal(std::istream& is);

}  // namespace wavext
