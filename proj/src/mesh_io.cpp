#include "wavext/mesh.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wavext {

namespace {

constexpr const char* kMagic = "wavext-mesh";
constexpr const char* kVersion = "v1";

void write_header(std::ostream& os, int dim) { os << kMagic << ' ' << kVersion << ' ' << dim << '\n'; }

void read_header(std::istream& is, int expected_dim) {
  std::string magic, version;
  int dim = 0;
  if (!(is >> magic >> version >> dim) || magic != kMagic) {
    throw std::runtime_error("mesh file: missing 'wavext-mesh' header");
  }
  if (version != kVersion) throw std::runtime_error("mesh file: unsupported version " + version);
  if (dim != expected_dim) {
    throw std::runtime_error("mesh file: expected dimension " + std::to_string(expected_dim) +
                             ", found " + std::to_string(dim));
  }
}

template <typename T>
T read_value(std::istream& is, const char* what) {
  T value{};
  if (!(is >> value)) throw std::runtime_error(std::string("mesh file: failed to read ") + what);
  return value;
}

void write_interval_mesh(std::ostream& os, const Eigen::VectorXd& nodes, const std::vector<bool>& flags) {
  write_header(os, 1);
  os << std::setprecision(17);
  os << nodes.size() << '\n';
  for (Eigen::Index i = 0; i < nodes.size(); ++i) os << nodes[i] << '\n';
  os << nodes.size() - 1 << '\n';
  for (Eigen::Index i = 0; i + 1 < nodes.size(); ++i) os << i << ' ' << i + 1 << '\n';
  os << flags.size() << '\n';
  for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? " " : "") << (flags[i] ? 1 : 0);
  os << '\n';
}

std::pair<Eigen::VectorXd, std::vector<bool>> read_interval_mesh(std::istream& is) {
  read_header(is, 1);
  const auto nv = read_value<Eigen::Index>(is, "vertex count");
  if (nv < 2) throw std::runtime_error("mesh file: interval mesh needs at least two vertices");
  Eigen::VectorXd nodes(nv);
  for (Eigen::Index i = 0; i < nv; ++i) nodes[i] = read_value<double>(is, "vertex coordinate");
  const auto ne = read_value<Eigen::Index>(is, "element count");
  if (ne != nv - 1) throw std::runtime_error("mesh file: interval mesh must have vertex count - 1 elements");
  for (Eigen::Index e = 0; e < ne; ++e) {
    const auto a = read_value<Eigen::Index>(is, "element index");
    const auto b = read_value<Eigen::Index>(is, "element index");
    if (a != e || b != e + 1) throw std::runtime_error("mesh file: interval elements must be consecutive");
  }
  const auto nf = read_value<Eigen::Index>(is, "flag count");
  if (nf != nv) throw std::runtime_error("mesh file: one boundary flag per vertex required");
  std::vector<bool> flags(static_cast<std::size_t>(nv));
  for (Eigen::Index i = 0; i < nv; ++i) flags[static_cast<std::size_t>(i)] = read_value<int>(is, "flag") != 0;
  return {std::move(nodes), std::move(flags)};
}

}  // namespace

void write_mesh(std::ostream& os, const SpatialMesh1D& mesh) {
  std::vector<bool> flags(static_cast<std::size_t>(mesh.nodes().size()), false);
  flags.front() = flags.back() = true;
  write_interval_mesh(os, mesh.nodes(), flags);
}

void write_mesh(std::ostream& os, const TemporalMesh& mesh) {
  // Only t = 0 is constrained (initial condition).
  std::vector<bool> flags(static_cast<std::size_t>(mesh.nodes().size()), false);
  flags.front() = true;
  write_interval_mesh(os, mesh.nodes(), flags);
}

void write_mesh(std::ostream& os, const TriangleMesh& mesh) {
  write_header(os, 2);
  os << std::setprecision(17);
  os << mesh.num_vertices() << '\n';
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
    os << mesh.vertices()(i, 0) << ' ' << mesh.vertices()(i, 1) << '\n';
  }
  os << mesh.num_elements() << '\n';
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    os << mesh.triangles()(e, 0) << ' ' << mesh.triangles()(e, 1) << ' ' << mesh.triangles()(e, 2) << '\n';
  }
  const auto& flags = mesh.boundary();
  os << flags.size() << '\n';
  for (std::size_t i = 0; i < flags.size(); ++i) os << (i ? " " : "") << (flags[i] ? 1 : 0);
  os << '\n';
}

SpatialMesh1D read_mesh_1d(std::istream& is) {
  auto [nodes, flags] = read_interval_mesh(is);
  for (std::size_t i = 1; i + 1 < flags.size(); ++i) {
    if (flags[i]) throw std::runtime_error("mesh file: interior vertex flagged Dirichlet");
  }
  if (!flags.front() || !flags.back()) throw std::runtime_error("mesh file: endpoints must be flagged Dirichlet");
  return SpatialMesh1D(std::move(nodes));
}

TemporalMesh read_mesh_temporal(std::istream& is) {
  auto [nodes, flags] = read_interval_mesh(is);
  if (!flags.front()) throw std::runtime_error("mesh file: t = 0 must be flagged");
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (flags[i]) throw std::runtime_error("mesh file: only t = 0 may be flagged in a temporal mesh");
  }
  return TemporalMesh(std::move(nodes));
}

TriangleMesh read_mesh_2d(std::istream& is) {
  read_header(is, 2);
  const auto nv = read_value<Eigen::Index>(is, "vertex count");
  Vertices2D v(nv, 2);
  for (Eigen::Index i = 0; i < nv; ++i) {
    v(i, 0) = read_value<double>(is, "vertex coordinate");
    v(i, 1) = read_value<double>(is, "vertex coordinate");
  }
  const auto ne = read_value<Eigen::Index>(is, "element count");
  Triangles t(ne, 3);
  for (Eigen::Index e = 0; e < ne; ++e) {
    for (int k = 0; k < 3; ++k) t(e, k) = read_value<int>(is, "element index");
  }
  const auto nf = read_value<Eigen::Index>(is, "flag count");
  if (nf != nv) throw std::runtime_error("mesh file: one boundary flag per vertex required");
  std::vector<bool> flags(static_cast<std::size_t>(nv));
  for (Eigen::Index i = 0; i < nv; ++i) flags[static_cast<std::size_t>(i)] = read_value<int>(is, "flag") != 0;
  return TriangleMesh(std::move(v), std::move(t), std::move(flags));
}

}  // namespace wavext
