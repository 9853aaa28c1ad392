#include "wavext/temporal_hilbert.hpp"

#include "wavext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavext {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mesh(const TemporalMesh& mesh) {
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    if (!(mesh.element_size(e) > 0.0)) throw std::invalid_argument("temporal mesh has a zero-length element");
  }
}

/// Per-mode quantities for a contiguous block of modes [first, first + count).
/// Rows index hats (or elements), columns index modes.
struct ModeBlock {
  Eigen::MatrixXd deriv_cos;      // int phi_l' cos(w t) dt
  Eigen::MatrixXd deriv_sine;     // (2/T) int phi_l' sin(w t) dt
  Eigen::MatrixXd sine;           // (2/T) int phi_l sin(w t) dt
  Eigen::MatrixXd hat_cos;        // int phi_l cos(w t) dt
  Eigen::MatrixXd element_cos;    // int_{t_{e-1}}^{t_e} cos(w t) dt
};

ModeBlock mode_block(const TemporalMesh& mesh, Eigen::Index first, Eigen::Index count) {
  const Eigen::VectorXd& t = mesh.nodes();
  const Eigen::Index n = mesh.num_elements();
  const double T = mesh.horizon();
  const FourierModes modes(T, first + count);

  Eigen::RowVectorXd w(count);
  for (Eigen::Index j = 0; j < count; ++j) w[j] = modes.omega(first + j);

  Eigen::MatrixXd s(n + 1, count), c(n + 1, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      s(i, j) = std::sin(w[j] * t[i]);
      c(i, j) = std::cos(w[j] * t[i]);
    }
    // sin(w_j T) = (-1)^j and cos(w_j T) = 0 exactly.
    s(n, j) = ((first + j) % 2 == 0) ? 1.0 : -1.0;
    c(n, j) = 0.0;
  }

  // Difference quotients per element e = 1..n (row e-1).
  Eigen::MatrixXd ds(n + 1, count), dc(n + 1, count);
  for (Eigen::Index e = 0; e < n; ++e) {
    const double h = mesh.element_size(e);
    ds.row(e) = (s.row(e + 1) - s.row(e)) / h;
    dc.row(e) = (c.row(e) - c.row(e + 1)) / h;
  }
  ds.row(n).setZero();
  dc.row(n).setZero();

  const Eigen::RowVectorXd inv_w = w.cwiseInverse();
  ModeBlock b;
  b.deriv_cos.resize(n, count);
  b.deriv_sine.resize(n, count);
  for (Eigen::Index l = 0; l < n; ++l) {
    b.deriv_cos.row(l) = (ds.row(l) - ds.row(l + 1)).cwiseProduct(inv_w);
    b.deriv_sine.row(l) = (2.0 / T) * (dc.row(l) - dc.row(l + 1)).cwiseProduct(inv_w);
  }
  // Integration by parts with phi_l(0) = 0 and cos(w T) = 0.
  b.sine = (2.0 / T) * (b.deriv_cos.array().rowwise() * inv_w.array()).matrix();
  b.hat_cos = -(T / 2.0) * (b.deriv_sine.array().rowwise() * inv_w.array()).matrix();
  b.hat_cos.row(n - 1) += s.row(n).cwiseProduct(inv_w);
  b.element_cos.resize(n, count);
  for (Eigen::Index e = 0; e < n; ++e) b.element_cos.row(e) = (s.row(e + 1) - s.row(e)).cwiseProduct(inv_w);
  return b;
}

/// Elementwise Neumaier accumulation of matrix-valued block sums.
class MatrixAccumulator {
 public:
  explicit MatrixAccumulator(Eigen::Index n) : sum_(Eigen::MatrixXd::Zero(n, n)), comp_(Eigen::MatrixXd::Zero(n, n)) {}

  void add(const Eigen::MatrixXd& x) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      double& s = sum_.data()[k];
      const double v = x.data()[k];
      const double t = s + v;
      comp_.data()[k] += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
      s = t;
    }
  }
  Eigen::MatrixXd value() const { return sum_ + comp_; }

 private:
  Eigen::MatrixXd sum_;
  Eigen::MatrixXd comp_;
};

/// Upper bound of sum_{j >= K} omega_j^{-p}, p >= 2.
double tail_power_sum(double T, Eigen::Index K, int p) {
  return std::pow(T / kPi, p) * std::pow(static_cast<double>(K), 1 - p) / (p - 1);
}

}  // namespace

FourierModes::FourierModes(double horizon, Eigen::Index count) : horizon_(horizon), count_(count) {
  if (!(horizon > 0.0)) throw std::invalid_argument("FourierModes: horizon must be positive");
  if (count < 1) throw std::invalid_argument("FourierModes: need at least one mode");
}

Eigen::VectorXd sine_coefficients_hat(const TemporalMesh& mesh, Eigen::Index l, const FourierModes& modes) {
  if (l < 1 || l > mesh.num_dofs()) {
    throw std::out_of_range("sine_coefficients_hat: basis index " + std::to_string(l) + " out of range");
  }
  check_mesh(mesh);
  if (modes.horizon() != mesh.horizon()) throw std::invalid_argument("sine_coefficients_hat: horizon mismatch");
  const Eigen::VectorXd& t = mesh.nodes();
  const double T = mesh.horizon();
  const Eigen::Index n = mesh.num_elements();
  Eigen::VectorXd u(modes.count());
  for (Eigen::Index k = 0; k < modes.count(); ++k) {
    const double w = modes.omega(k);
    auto sine_at = [&](Eigen::Index i) {
      if (i == n) return (k % 2 == 0) ? 1.0 : -1.0;
      return std::sin(w * t[i]);
    };
    // int phi' cos(w t) over the rising and (if present) falling element.
    double deriv_cos = (sine_at(l) - sine_at(l - 1)) / mesh.element_size(l - 1);
    if (l < n) deriv_cos -= (sine_at(l + 1) - sine_at(l)) / mesh.element_size(l);
    u[k] = (2.0 / T) * deriv_cos / (w * w);
  }
  return u;
}

Eigen::VectorXd sine_coefficients_nodal(const TemporalMesh& mesh, const Eigen::VectorXd& values,
                                        const FourierModes& modes) {
  if (values.size() != mesh.num_dofs()) throw std::invalid_argument("sine_coefficients_nodal: size mismatch");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(modes.count());
  for (Eigen::Index l = 1; l <= mesh.num_dofs(); ++l) {
    if (values[l - 1] != 0.0) u += values[l - 1] * sine_coefficients_hat(mesh, l, modes);
  }
  return u;
}

double hilbert_apply_series(const Eigen::VectorXd& coeffs, const FourierModes& modes, double t) {
  if (!(t >= 0.0 && t <= modes.horizon())) throw std::domain_error("hilbert_apply_series: t outside [0, T]");
  const Eigen::Index n = std::min<Eigen::Index>(coeffs.size(), modes.count());
  CompensatedSum<double> sum;
  for (Eigen::Index k = 0; k < n; ++k) sum.add(coeffs[k] * std::cos(modes.omega(k) * t));
  return sum.value();
}

Eigen::Index default_truncation(Eigen::Index n_t) { return std::max<Eigen::Index>(10000, 100 * n_t); }

TemporalMatrices assemble_temporal_matrices(const TemporalMesh& mesh, const TemporalAssemblyOptions& options) {
  check_mesh(mesh);
  const Eigen::Index n = mesh.num_dofs();
  const Eigen::Index K = options.truncation.value_or(default_truncation(n));
  if (K < 1) throw std::invalid_argument("assemble_temporal_matrices: truncation must be >= 1");
  const double T = mesh.horizon();

  TemporalMatrices out;
  out.truncation = K;

  // Total variation of d/dt phi_l bounds the per-mode integrals.
  Eigen::VectorXd variation(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    variation[l] = 2.0 / mesh.element_size(l) + (l + 1 < n ? 2.0 / mesh.element_size(l + 1) : 0.0);
  }
  const double v_max = variation.maxCoeff();
  const double s2 = tail_power_sum(T, K, 2);
  const double s3 = tail_power_sum(T, K, 3);
  const double s4 = tail_power_sum(T, K, 4);
  out.tail_bound.stiffness = options.exact_stiffness ? 0.0 : (2.0 / T) * v_max * v_max * s2;
  out.tail_bound.mass = (2.0 / T) * v_max * (s3 + v_max * s4);
  out.tail_bound.moment = (4.0 / T) * v_max * s3;
  if (options.tolerance) {
    const double worst = std::max({out.tail_bound.mass, out.tail_bound.stiffness, out.tail_bound.moment});
    if (worst > *options.tolerance) {
      throw std::runtime_error("assemble_temporal_matrices: tail bound " + std::to_string(worst) +
                               " exceeds tolerance at K = " + std::to_string(K));
    }
  }

  MatrixAccumulator mass(n), stiffness(n), moment(n);
  constexpr Eigen::Index kBlock = 1024;
  for (Eigen::Index first = 0; first < K; first += kBlock) {
    const Eigen::Index count = std::min(kBlock, K - first);
    const ModeBlock b = mode_block(mesh, first, count);
    if (!options.exact_stiffness) stiffness.add(b.deriv_cos * b.deriv_sine.transpose());
    mass.add(b.sine * b.hat_cos.transpose());
    moment.add(b.sine * b.element_cos.transpose());
  }
  out.mass = mass.value();
  out.stiffness = options.exact_stiffness ? temporal_stiffness_closed_form<double>(mesh) : stiffness.value();
  out.moment = moment.value();
  return out;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace wavext
