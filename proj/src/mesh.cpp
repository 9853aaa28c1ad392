#include "wavext/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace wavext {

namespace {

void require_increasing(const Eigen::VectorXd& nodes, const char* what) {
  if (nodes.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least two nodes");
  for (Eigen::Index i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": nodes must be strictly increasing");
    }
  }
}

Eigen::VectorXd bisect(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size() - 1;
  Eigen::VectorXd out(2 * n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[2 * i] = nodes[i];
    out[2 * i + 1] = 0.5 * (nodes[i] + nodes[i + 1]);
  }
  out[2 * n] = nodes[n];
  return out;
}

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::map<Edge, int> edge_multiplicity(const Triangles& tris) {
  std::map<Edge, int> count;
  for (Eigen::Index e = 0; e < tris.rows(); ++e) {
    for (int k = 0; k < 3; ++k) ++count[make_edge(tris(e, k), tris(e, (k + 1) % 3))];
  }
  return count;
}

double signed_area(const Vertices2D& v, int a, int b, int c) {
  return 0.5 * ((v(b, 0) - v(a, 0)) * (v(c, 1) - v(a, 1)) -
                (v(c, 0) - v(a, 0)) * (v(b, 1) - v(a, 1)));
}

}  // namespace

TemporalMesh::TemporalMesh(Eigen::VectorXd nodes) : nodes_(std::move(nodes)) {
  require_increasing(nodes_, "TemporalMesh");
  if (nodes_[0] != 0.0) throw std::invalid_argument("TemporalMesh: first node must be 0");
}

double TemporalMesh::h_max() const {
  return (nodes_.tail(nodes_.size() - 1) - nodes_.head(nodes_.size() - 1)).maxCoeff();
}
double TemporalMesh::h_min() const {
  return (nodes_.tail(nodes_.size() - 1) - nodes_.head(nodes_.size() - 1)).minCoeff();
}

SpatialMesh1D::SpatialMesh1D(Eigen::VectorXd nodes) : nodes_(std::move(nodes)) {
  require_increasing(nodes_, "SpatialMesh1D");
}

double SpatialMesh1D::h_max() const {
  return (nodes_.tail(nodes_.size() - 1) - nodes_.head(nodes_.size() - 1)).maxCoeff();
}
double SpatialMesh1D::h_min() const {
  return (nodes_.tail(nodes_.size() - 1) - nodes_.head(nodes_.size() - 1)).minCoeff();
}

TriangleMesh::TriangleMesh(Vertices2D vertices, Triangles triangles, std::vector<bool> boundary)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_(std::move(boundary)) {
  if (static_cast<Eigen::Index>(boundary_.size()) != vertices_.rows()) {
    throw std::invalid_argument("TriangleMesh: one boundary flag per vertex required");
  }
  for (Eigen::Index e = 0; e < triangles_.rows(); ++e) {
    for (int k = 0; k < 3; ++k) {
      if (triangles_(e, k) < 0 || triangles_(e, k) >= vertices_.rows()) {
        throw std::invalid_argument("TriangleMesh: vertex index out of range");
      }
    }
    if (!(signed_area(vertices_, triangles_(e, 0), triangles_(e, 1), triangles_(e, 2)) > 0.0)) {
      throw std::invalid_argument("TriangleMesh: triangle " + std::to_string(e) +
                                  " is degenerate or negatively oriented");
    }
  }
}

Eigen::Index TriangleMesh::num_interior() const {
  return static_cast<Eigen::Index>(std::count(boundary_.begin(), boundary_.end(), false));
}

double TriangleMesh::area(Eigen::Index e) const {
  return signed_area(vertices_, triangles_(e, 0), triangles_(e, 1), triangles_(e, 2));
}

double TriangleMesh::total_area() const {
  double s = 0.0;
  for (Eigen::Index e = 0; e < num_elements(); ++e) s += area(e);
  return s;
}

double TriangleMesh::h_x() const {
  double h = 0.0;
  for (Eigen::Index e = 0; e < num_elements(); ++e) {
    double prod = 1.0;
    for (int k = 0; k < 3; ++k) {
      prod *= (vertices_.row(triangles_(e, k)) - vertices_.row(triangles_(e, (k + 1) % 3))).norm();
    }
    h = std::max(h, prod / (4.0 * area(e)));
  }
  return h;
}

std::vector<Eigen::Index> interior_numbering(const std::vector<bool>& boundary) {
  std::vector<Eigen::Index> map(boundary.size(), -1);
  Eigen::Index next = 0;
  for (std::size_t v = 0; v < boundary.size(); ++v) {
    if (!boundary[v]) map[v] = next++;
  }
  return map;
}

std::vector<Eigen::Index> interior_numbering(const SpatialMesh1D& mesh) {
  std::vector<bool> flags(static_cast<std::size_t>(mesh.nodes().size()), false);
  flags.front() = true;
  flags.back() = true;
  return interior_numbering(flags);
}

std::pair<SpatialMesh1D, TemporalMesh> initial_mesh_1d() {
  constexpr double T = 10.0;
  return {SpatialMesh1D(Eigen::Vector3d(0.0, 0.25, 1.0)),
          TemporalMesh(Eigen::Vector4d(0.0, T / 8.0, T / 4.0, T))};
}

TriangleMesh lshape_mesh(LShapeDiagonal diagonal) {
  // (-1,1)^2 minus [0,1]x[-1,0] covered by twelve squares of side 1/2.
  constexpr int n = 5;
  constexpr double h = 0.5;
  auto in_lshape = [](int ix, int iy) { return !(ix >= 2 && iy < 2); };  // square lower-left index
  std::vector<int> index(n * n, -1);
  auto used = [&](int gx, int gy) {
    for (int sx = gx - 1; sx <= gx; ++sx) {
      for (int sy = gy - 1; sy <= gy; ++sy) {
        if (sx >= 0 && sy >= 0 && sx < n - 1 && sy < n - 1 && in_lshape(sx, sy)) return true;
      }
    }
    return false;
  };
  std::vector<std::pair<double, double>> coords;
  for (int gy = 0; gy < n; ++gy) {
    for (int gx = 0; gx < n; ++gx) {
      if (!used(gx, gy)) continue;
      index[gy * n + gx] = static_cast<int>(coords.size());
      coords.emplace_back(-1.0 + h * gx, -1.0 + h * gy);
    }
  }
  std::vector<Eigen::RowVector3i> tris;
  for (int sy = 0; sy < n - 1; ++sy) {
    for (int sx = 0; sx < n - 1; ++sx) {
      if (!in_lshape(sx, sy)) continue;
      const int p00 = index[sy * n + sx];
      const int p10 = index[sy * n + sx + 1];
      const int p11 = index[(sy + 1) * n + sx + 1];
      const int p01 = index[(sy + 1) * n + sx];
      const bool rising =
          diagonal == LShapeDiagonal::rising || (diagonal == LShapeDiagonal::mirrored && sx < 2 && sy >= 2);
      if (rising) {
        tris.emplace_back(p00, p10, p11);
        tris.emplace_back(p00, p11, p01);
      } else {
        tris.emplace_back(p00, p10, p01);
        tris.emplace_back(p10, p11, p01);
      }
    }
  }
  Vertices2D v(static_cast<Eigen::Index>(coords.size()), 2);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    v(static_cast<Eigen::Index>(i), 0) = coords[i].first;
    v(static_cast<Eigen::Index>(i), 1) = coords[i].second;
  }
  Triangles t(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i) t.row(static_cast<Eigen::Index>(i)) = tris[i];

  std::vector<bool> boundary(coords.size(), false);
  for (const auto& [edge, count] : edge_multiplicity(t)) {
    if (count == 1) {
      boundary[static_cast<std::size_t>(edge.first)] = true;
      boundary[static_cast<std::size_t>(edge.second)] = true;
    }
  }
  return TriangleMesh(std::move(v), std::move(t), std::move(boundary));
}

std::pair<TriangleMesh, TemporalMesh> initial_mesh_lshape() {
  return {lshape_mesh(LShapeDiagonal::mirrored),
          TemporalMesh((Eigen::VectorXd(5) << 0.0, 0.125, 0.25, 0.5, 2.0).finished())};
}

TemporalMesh refine_uniform(const TemporalMesh& mesh) { return TemporalMesh(bisect(mesh.nodes())); }

SpatialMesh1D refine_uniform(const SpatialMesh1D& mesh) { return SpatialMesh1D(bisect(mesh.nodes())); }

TriangleMesh refine_uniform(const TriangleMesh& mesh) {
  const Triangles& tris = mesh.triangles();
  const auto multiplicity = edge_multiplicity(tris);

  std::vector<std::pair<double, double>> coords;
  std::vector<bool> boundary = mesh.boundary();
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
    coords.emplace_back(mesh.vertices()(i, 0), mesh.vertices()(i, 1));
  }
  std::map<Edge, int> midpoint;
  for (const auto& [edge, count] : multiplicity) {
    midpoint[edge] = static_cast<int>(coords.size());
    coords.emplace_back(0.5 * (coords[edge.first].first + coords[edge.second].first),
                        0.5 * (coords[edge.first].second + coords[edge.second].second));
    boundary.push_back(count == 1);
  }

  Triangles out(4 * tris.rows(), 3);
  for (Eigen::Index e = 0; e < tris.rows(); ++e) {
    const int a = tris(e, 0), b = tris(e, 1), c = tris(e, 2);
    const int ab = midpoint.at(make_edge(a, b));
    const int bc = midpoint.at(make_edge(b, c));
    const int ca = midpoint.at(make_edge(c, a));
    out.row(4 * e + 0) << a, ab, ca;
    out.row(4 * e + 1) << ab, b, bc;
    out.row(4 * e + 2) << ca, bc, c;
    out.row(4 * e + 3) << ab, bc, ca;
  }
  Vertices2D v(static_cast<Eigen::Index>(coords.size()), 2);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    v(static_cast<Eigen::Index>(i), 0) = coords[i].first;
    v(static_cast<Eigen::Index>(i), 1) = coords[i].second;
  }
  return TriangleMesh(std::move(v), std::move(out), std::move(boundary));
}

}  // namespace wavext
