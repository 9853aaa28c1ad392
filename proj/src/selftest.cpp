#include "wavext/selftest.hpp"

#include "wavext/analysis.hpp"
#include "wavext/mesh.hpp"
#include "wavext/quadrature.hpp"
#include "wavext/spacetime_system.hpp"
#include "wavext/spatial_fem.hpp"
#include "wavext/temporal_hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace wavext {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCatalan = 0.915965594177219015054603514932384110774;
constexpr double kZeta3 = 1.202056903159594285399738161511449990765;
constexpr double kBeta4 = 0.988944551741105336108422176816657560504;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// L2(0, T) inner product by composite Gauss quadrature.
double inner(const std::function<double(double)>& f, const std::function<double(double)>& g, double T) {
  const Rule1D r = composite_gauss(20, 64);
  double s = 0.0;
  for (Eigen::Index q = 0; q < r.size(); ++q) {
    const double t = T * r.points[q];
    s += r.weights[q] * f(t) * g(t);
  }
  return T * s;
}

Outcome hilbert_modes() {
  const double T = 1.5;
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double w = (0.5 + k) * kPi / T;
    PiecewiseSmooth u{[w](double s) { return std::sin(w * s); }, {}, 0.0, T};
    for (int i = 0; i < 100; ++i) {
      const double t = (i + 0.5) * T / 100.0;
      worst = std::max(worst, std::abs(hilbert_apply_cpv(u, T, t) - std::cos(w * t)));
    }
  }
  return {worst <= 1e-11, format("max |H sin - cos| by CPV = %.2e over 5 modes x 100 points", worst)};
}

Outcome hilbert_unitarity() {
  const double T = 2.0;
  const FourierModes modes(T, 20);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd a(20), b(20);
  for (Eigen::Index k = 0; k < 20; ++k) {
    a[k] = dist(rng);
    b[k] = dist(rng);
  }
  auto sine_sum = [&](const Eigen::VectorXd& c) {
    return [&modes, c](double t) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < c.size(); ++k) s += c[k] * std::sin(modes.omega(k) * t);
      return s;
    };
  };
  auto cosine_sum = [&](const Eigen::VectorXd& c) {
    return [&modes, c](double t) { return hilbert_apply_series(c, modes, t); };
  };
  const std::function<double(double)> u = sine_sum(a), hu = cosine_sum(a);
  const std::function<double(double)> w = cosine_sum(b), hinv_w = sine_sum(b);
  const double nu = std::sqrt(inner(u, u, T));
  const double nhu = std::sqrt(inner(hu, hu, T));
  const double unit = std::abs(nhu - nu) / nu;
  const double lhs = inner(hu, w, T);
  const double rhs = inner(u, hinv_w, T);
  const double adj = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
  return {unit <= 1e-12 && adj <= 1e-12,
          format("| ||Hu|| - ||u|| | / ||u|| = %.1e, adjoint-inverse mismatch %.1e", unit, adj)};
}

Outcome temporal_matrix_cpv() {
  const TemporalMesh unit((Eigen::VectorXd(2) << 0.0, 1.0).finished());
  const TemporalMatrices one = assemble_temporal_matrices(unit);
  const double at_ref = 8.0 * kCatalan / (kPi * kPi);
  const double mt_ref = 14.0 * kZeta3 / std::pow(kPi, 3) - 32.0 * kBeta4 / std::pow(kPi, 4);
  const double closed = std::max(std::abs(one.stiffness(0, 0) - at_ref), std::abs(one.mass(0, 0) - mt_ref));

  const TemporalMesh mesh((Eigen::VectorXd(5) << 0.0, 0.25, 0.5, 1.25, 2.0).finished());
  const TemporalMatrices spectral = assemble_temporal_matrices(mesh);
  const TemporalMatrices cpv = assemble_temporal_matrices_cpv(mesh);
  const double rel = std::max({max_abs(spectral.mass - cpv.mass) / max_abs(cpv.mass),
                               max_abs(spectral.stiffness - cpv.stiffness) / max_abs(cpv.stiffness),
                               max_abs(spectral.moment - cpv.moment) / max_abs(cpv.moment)});
  return {closed <= 1e-8 && rel <= 1e-6,
          format("closed forms on {0,1}: %.1e; spectral vs CPV on 4 elements: %.1e relative", closed, rel)};
}

/// Temporal meshes whose symmetric-part eigenvalues are resolvable in long
/// double. Those eigenvalues decay roughly like 10^(-N_t), so beyond about
/// N_t = 12 their sign is lost in the rounding of the assembly.
std::vector<TemporalMesh> positivity_meshes() {
  std::vector<TemporalMesh> meshes;
  meshes.emplace_back((Eigen::VectorXd(2) << 0.0, 1.0).finished());
  for (int level = 0; level < 3; ++level) meshes.push_back(refine_uniform(initial_mesh_1d().second, level));
  for (int level = 0; level < 2; ++level) meshes.push_back(refine_uniform(initial_mesh_lshape().second, level));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  for (int m = 0; m < 5; ++m) {
    Eigen::VectorXd nodes(2 + m);
    nodes[0] = 0.0;
    for (Eigen::Index i = 1; i < nodes.size(); ++i) nodes[i] = nodes[i - 1] + dist(rng);
    meshes.emplace_back(nodes);
  }
  return meshes;
}

template <typename Real>
Real min_sym_eigenvalue_of(const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& m) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix sym = (m + m.transpose()) / 2;
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Outcome temporal_positivity() {
  const auto meshes = positivity_meshes();
  long double worst = std::numeric_limits<long double>::infinity();
  for (const TemporalMesh& mesh : meshes) {
    const auto t = assemble_temporal_matrices_closed_form<long double>(mesh);
    worst = std::min({worst, min_sym_eigenvalue_of(t.mass), min_sym_eigenvalue_of(t.stiffness)});
  }
  return {worst > 0.0L, format("smallest symmetric-part eigenvalue over %.0f meshes with N_t <= 12: %.3e",
                               static_cast<double>(meshes.size()), static_cast<double>(worst))};
}

template <typename SpatialMesh>
KroneckerSum small_system(const SpatialMesh& s, const TemporalMesh& t) {
  return build_system(assemble_temporal_matrices(t), assemble_spatial(s));
}

std::vector<KroneckerSum> small_systems() {
  std::vector<KroneckerSum> out;
  const auto [s1, t1] = initial_mesh_1d();
  const auto [s2, t2] = initial_mesh_lshape();
  out.push_back(small_system(refine_uniform(s1, 2), refine_uniform(t1, 2)));
  out.push_back(small_system(s2, refine_uniform(t2, 1)));
  out.push_back(small_system(refine_uniform(s2, 1), t2));
  return out;
}

Outcome kronecker_apply() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  double worst = 0.0;
  for (const KroneckerSum& sys : small_systems()) {
    Eigen::VectorXd x(sys.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    const Eigen::VectorXd explicit_y = sys.assemble() * x;
    worst = std::max(worst, (sys.apply(x) - explicit_y).norm() / explicit_y.norm());
  }
  return {worst <= 1e-14, format("factored vs assembled product: %.1e relative", worst)};
}

/// K_h = A_t (x) M_x + M_t (x) A_x in long double from closed-form temporal matrices.
template <typename SpatialMesh>
Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> spacetime_matrix_ld(const SpatialMesh& s,
                                                                               const TemporalMesh& t) {
  using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const auto tm = assemble_temporal_matrices_closed_form<long double>(t);
  const SpatialMatrices sm = assemble_spatial(s);
  const Matrix mx = Eigen::MatrixXd(sm.mass).cast<long double>();
  const Matrix ax = Eigen::MatrixXd(sm.stiffness).cast<long double>();
  const Eigen::Index nt = tm.mass.rows(), mxn = mx.rows();
  Matrix k(nt * mxn, nt * mxn);
  for (Eigen::Index l = 0; l < nt; ++l) {
    for (Eigen::Index m = 0; m < nt; ++m) {
      k.block(l * mxn, m * mxn, mxn, mxn) = tm.stiffness(l, m) * mx + tm.mass(l, m) * ax;
    }
  }
  return k;
}

Outcome spacetime_positivity() {
  const auto [s1, t1] = initial_mesh_1d();
  const auto [s2, t2] = initial_mesh_lshape();
  std::vector<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> systems;
  for (int level = 0; level < 3; ++level) {
    systems.push_back(spacetime_matrix_ld(refine_uniform(s1, level), refine_uniform(t1, level)));
  }
  for (int level = 0; level < 2; ++level) {
    systems.push_back(spacetime_matrix_ld(refine_uniform(s2, level), refine_uniform(t2, level)));
  }
  systems.push_back(spacetime_matrix_ld(s2, refine_uniform(t2, 1)));
  systems.push_back(spacetime_matrix_ld(refine_uniform(s2, 1), t2));
  long double worst = std::numeric_limits<long double>::infinity();
  for (const auto& k : systems) worst = std::min(worst, min_sym_eigenvalue_of(k));
  return {worst > 0.0L, format("smallest eigenvalue of sym(K_h) over %.0f systems with N_t <= 12: %.3e",
                               static_cast<double>(systems.size()), static_cast<double>(worst))};
}

Outcome solver_equivalence() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist;
  double worst = 0.0;
  for (const KroneckerSum& sys : small_systems()) {
    Eigen::VectorXd rhs(sys.size());
    for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = dist(rng);
    const SpaceTimeSolution a = solve_tensor(sys, rhs);
    const SpaceTimeSolution b = solve_assembled(sys, rhs);
    worst = std::max(worst, (a.coefficients - b.coefficients).norm() / b.coefficients.norm());
  }
  return {worst <= 1e-10, format("tensor vs assembled: %.1e relative", worst)};
}

Outcome fd_source() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (const ManufacturedProblem& p : {problem_u1(), problem_u2()}) {
    const double T = p.horizon;
    const double hx = 1e-5 * (p.dim == 1 ? 1.0 : 2.0);
    const double ht = 1e-5 * T;
    for (int n = 0; n < 100; ++n) {
      Eigen::Vector2d x;
      if (p.dim == 1) {
        x = Eigen::Vector2d(0.01 + 0.98 * unit(rng), 0.0);
      } else {
        do {
          x = Eigen::Vector2d(-0.99 + 1.98 * unit(rng), -0.99 + 1.98 * unit(rng));
        } while (x.x() > -0.01 && x.y() < 0.01);
      }
      const double t = T * (0.01 + 0.98 * unit(rng));
      // Fourth-order central differences of u along direction (dx, dt).
      auto first = [&](const Eigen::Vector2d& dx, double dt, double h) {
        return (-p.u(x + 2.0 * dx, t + 2.0 * dt) + 8.0 * p.u(x + dx, t + dt) - 8.0 * p.u(x - dx, t - dt) +
                p.u(x - 2.0 * dx, t - 2.0 * dt)) /
               (12.0 * h);
      };
      auto second = [&](const Eigen::Vector2d& dx, double dt, double h) {
        return (-p.u(x + 2.0 * dx, t + 2.0 * dt) + 16.0 * p.u(x + dx, t + dt) - 30.0 * p.u(x, t) +
                16.0 * p.u(x - dx, t - dt) - p.u(x - 2.0 * dx, t - 2.0 * dt)) /
               (12.0 * h * h);
      };
      const Eigen::Vector2d zero = Eigen::Vector2d::Zero();
      const double u0 = p.u(x, t);
      const double ut = first(zero, ht, ht);
      const double utt = second(zero, ht, ht);
      Eigen::Vector2d grad = Eigen::Vector2d::Zero();
      double lap = 0.0;
      for (int d = 0; d < p.dim; ++d) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[d] = hx;
        grad[d] = first(e, 0.0, hx);
        lap += second(e, 0.0, hx);
      }
      auto rel = [](double exact, double approx, double scale) {
        return std::abs(exact - approx) / std::max(std::abs(exact), scale);
      };
      // Differences of u lose about eps |u| / h (first) and eps |u| / h^2 (second)
      // to rounding; deviations are measured relative to at least 100 times that.
      constexpr double eps = std::numeric_limits<double>::epsilon();
      const double u_mag = std::max(std::abs(u0), 1e-300);
      const double floor_t = 100.0 * eps * u_mag / ht;
      const double floor_x = 100.0 * eps * u_mag / hx;
      const double floor_f = 100.0 * eps * u_mag * (1.0 / (ht * ht) + p.dim / (hx * hx));
      const double f = p.source(x, t);
      const Eigen::Vector2d g = p.grad_x(x, t);
      worst = std::max({worst, rel(f, utt - lap, floor_f), rel(p.du_dt(x, t), ut, floor_t), rel(g[0], grad[0], floor_x),
                        rel(g[1], grad[1], floor_x)});
    }
  }
  return {worst <= 1e-5, format("worst relative deviation from finite differences: %.1e", worst)};
}

Outcome mesh_sequence() {
  const std::vector<Eigen::Index> dof1 = {3, 18, 84, 360, 1488, 6048};
  const std::vector<Eigen::Index> dof2 = {20, 264, 2576, 22560};
  bool ok = true;
  auto [s1, t1] = initial_mesh_1d();
  for (std::size_t l = 0; l < dof1.size(); ++l) {
    ok = ok && s1.num_interior() * t1.num_dofs() == dof1[l];
    s1 = refine_uniform(s1);
    t1 = refine_uniform(t1);
  }
  auto [s2, t2] = initial_mesh_lshape();
  double area_err = 0.0;
  for (std::size_t l = 0; l < dof2.size(); ++l) {
    ok = ok && s2.num_interior() * t2.num_dofs() == dof2[l];
    area_err = std::max(area_err, std::abs(s2.total_area() - 3.0));
    s2 = refine_uniform(s2);
    t2 = refine_uniform(t2);
  }
  ok = ok && area_err <= 1e-12;
  return {ok, std::string(ok ? "dof sequences match" : "dof sequences differ") +
                  format("; L-shape area deviation %.1e", area_err)};
}

using SuiteFn = Outcome (*)();

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"hilbert-modes", hilbert_modes},
      {"hilbert-unitarity", hilbert_unitarity},
      {"temporal-matrix-cpv", temporal_matrix_cpv},
      {"temporal-positivity", temporal_positivity},
      {"kronecker-apply", kronecker_apply},
      {"spacetime-positivity", spacetime_positivity},
      {"solver-equivalence", solver_equivalence},
      {"fd-source", fd_source},
      {"mesh-sequence", mesh_sequence},
  };
  return suites;
}

}  // namespace

std::vector<std::string> selftest_suites() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

SuiteResult run_selftest_suite(const std::string& name) {
  for (const auto& [suite, fn] : registry()) {
    if (suite != name) continue;
    SuiteResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = fn();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw std::invalid_argument("unknown selftest suite '" + name + "'");
}

std::vector<SuiteResult> run_selftests(const std::function<void(const SuiteResult&)>& on_result) {
  std::vector<SuiteResult> out;
  for (const std::string& name : selftest_suites()) {
    out.push_back(run_selftest_suite(name));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace wavext
