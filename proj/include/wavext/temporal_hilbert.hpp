#pragma once

#include "wavext/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace wavext {

/// Truncated family of frequencies omega_k = (pi/2 + k pi) / T, k = 0..K-1.
/// H_T maps sin(omega_k t) to cos(omega_k t).
class FourierModes {
 public:
  FourierModes(double horizon, Eigen::Index count);

  double horizon() const { return horizon_; }
  Eigen::Index count() const { return count_; }
  double omega(Eigen::Index k) const { return (0.5 + static_cast<double>(k)) * std::numbers::pi / horizon_; }

 private:
  double horizon_;
  Eigen::Index count_;
};

/// Closed-form sine coefficients (2/T) int_0^T phi_l(t) sin(omega_k t) dt of the
/// temporal hat function phi_l, l = 1..N_t (phi_l(t_l) = 1, phi_l(0) = 0).
Eigen::VectorXd sine_coefficients_hat(const TemporalMesh& mesh, Eigen::Index l, const FourierModes& modes);

/// Sine coefficients of the piecewise linear function with the given values
/// at t_1..t_N (value zero at t_0).
Eigen::VectorXd sine_coefficients_nodal(const TemporalMesh& mesh, const Eigen::VectorXd& values,
                                        const FourierModes& modes);

/// (H_T u)(t) = sum_k u_k cos(omega_k t) over the truncated range.
double hilbert_apply_series(const Eigen::VectorXd& coeffs, const FourierModes& modes, double t);

/// Scalar function on (0, T) that is smooth between its breakpoints and
/// vanishes outside [support_begin, support_end].
struct PiecewiseSmooth {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
  double support_begin = 0.0;
  double support_end = std::numeric_limits<double>::infinity();
};

/// Temporal hat phi_l and its piecewise constant derivative, in the form
/// consumed by hilbert_apply_cpv.
PiecewiseSmooth hat_function(const TemporalMesh& mesh, Eigen::Index l);
PiecewiseSmooth hat_derivative(const TemporalMesh& mesh, Eigen::Index l);

/// H_T u evaluated through its principal value integral
///   v.p. int_0^T 1/(2T) [1/sin(pi(s+t)/(2T)) + 1/sin(pi(s-t)/(2T))] u(s) ds.
/// The 1/sin(pi(s-t)/(2T)) singularity is removed by subtracting u(t); the
/// subtracted principal value is integrated exactly via
/// (2T/pi) ln|tan(pi(s-t)/(4T))|. The remainder uses adaptive Gauss panels
/// split at t and at the breakpoints of u.
/// Throws std::domain_error unless 0 < t < T, std::runtime_error if the
/// quadrature does not converge.
double hilbert_apply_cpv(const PiecewiseSmooth& u, double horizon, double t, double tol = 1e-12);

/// Temporal matrices induced by H_T on the hat basis phi_1..phi_N:
///   mass[l,k]      = <phi_k, H_T phi_l>
///   stiffness[l,k] = <H_T d/dt phi_k, d/dt phi_l>
///   moment[m,l]    = int_{t_{l-1}}^{t_l} H_T phi_m dt
struct TemporalMatrices {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd moment;
  /// Number of Fourier modes summed; 0 for quadrature-based matrices.
  Eigen::Index truncation = 0;
  /// A-priori bounds on the discarded series tail, maximised over entries.
  struct TailBound {
    double mass = 0.0;
    double stiffness = 0.0;
    double moment = 0.0;
  } tail_bound;

  Eigen::Index size() const { return mass.rows(); }
};

/// max(10^4, 100 N_t).
Eigen::Index default_truncation(Eigen::Index n_t);

struct TemporalAssemblyOptions {
  std::optional<Eigen::Index> truncation;
  /// When set, assembly fails if any tail bound exceeds this value.
  std::optional<double> tolerance;
  /// Sum the stiffness series exactly through the Clausen function instead of
  /// truncating it; its tail decays only like 1/K.
  bool exact_stiffness = true;
};

/// Spectral assembly: each entry is a truncated mode sum of closed-form
/// per-mode integrals, accumulated blockwise with compensated summation.
/// The stiffness is summed to infinity unless options.exact_stiffness is off.
TemporalMatrices assemble_temporal_matrices(const TemporalMesh& mesh, const TemporalAssemblyOptions& options = {});

/// Outer quadrature of assemble_temporal_matrices_cpv: per element, an
/// `order`-point Gauss rule on `levels` panels graded by `ratio` towards each end.
struct CpvAssemblyOptions {
  double tol = 1e-12;
  int order = 8;
  int levels = 13;
  double ratio = 0.2;
};

/// Independent reference assembly by outer graded Gauss quadrature of
/// hilbert_apply_cpv. Intended for small meshes (cost grows like N_t^2).
TemporalMatrices assemble_temporal_matrices_cpv(const TemporalMesh& mesh, const CpvAssemblyOptions& options = {});

/// Clausen functions Cl_2(x) = sum sin(k x) / k^2, Cl_3(x) = sum cos(k x) / k^3
/// and Cl_4(x) = sum sin(k x) / k^4, k >= 1. Instantiated for double and long double.
template <typename Real>
Real clausen2(Real x);
template <typename Real>
Real clausen3(Real x);
template <typename Real>
Real clausen4(Real x);

/// The three temporal matrices with their mode series summed to infinity
/// through Clausen functions, in the precision Real (double or long double).
/// The hat-function differences cancel, so rounding in the mass grows like
/// eps (T / h_min)^3 and in the stiffness like eps T / h_min.
template <typename Real>
struct ClosedFormTemporalMatrices {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix mass;
  Matrix stiffness;
  Matrix moment;
};

template <typename Real>
ClosedFormTemporalMatrices<Real> assemble_temporal_matrices_closed_form(const TemporalMesh& mesh);

/// Stiffness part of assemble_temporal_matrices_closed_form alone.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> temporal_stiffness_closed_form(const TemporalMesh& mesh);

/// Row-major CSV with 17 significant digits.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace wavext
