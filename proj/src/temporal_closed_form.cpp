#include "wavext/quadrature.hpp"
#include "wavext/temporal_hilbert.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace wavext {

namespace {

template <typename Real>
constexpr Real kPi = std::numbers::pi_v<Real>;

template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// zeta(2k) / (k (2k + 1) (2 pi)^(2k)), k = 1..40: Cl_2(x) = x - x ln x + sum_k a_k x^(2k+1) on (0, 2 pi).
template <typename Real>
const std::vector<Real>& clausen_coefficients() {
  static const std::vector<Real> coeffs = [] {
    std::vector<Real> out;
    for (int k = 1; k <= 40; ++k) {
      const int p = 2 * k;
      Real zeta = kPi<Real> * kPi<Real> / 6;
      if (k > 1) {
        // Direct sum plus Euler-Maclaurin tail.
        constexpr int kTerms = 200;
        CompensatedSum<Real> z;
        for (int n = kTerms - 1; n >= 1; --n) z.add(std::pow(static_cast<Real>(n), static_cast<Real>(-p)));
        const Real N = kTerms;
        z.add(std::pow(N, static_cast<Real>(1 - p)) / (p - 1) + std::pow(N, static_cast<Real>(-p)) / 2 +
              p * std::pow(N, static_cast<Real>(-p - 1)) / 12 -
              p * (p + 1) * (p + 2) * std::pow(N, static_cast<Real>(-p - 3)) / 720);
        zeta = z.value();
      }
      out.push_back(zeta / (k * (2 * k + 1) * std::pow(2 * kPi<Real>, static_cast<Real>(p))));
    }
    return out;
  }();
  return coeffs;
}

template <typename Real>
const Real kZeta3 = static_cast<Real>(1.202056903159594285399738161511449990765L);

/// sum_k a_k a^(2k+1+shift) / divisor(k), summed until the terms stall.
template <typename Real, typename Divisor>
Real clausen_tail(Real a, int shift, Divisor divisor) {
  const Real a2 = a * a;
  Real power = a * a2 * std::pow(a, static_cast<Real>(shift));
  Real sum = 0;
  int k = 1;
  for (Real c : clausen_coefficients<Real>()) {
    const Real term = c * power / divisor(k);
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Real>::epsilon() * 1e-3 * std::abs(sum)) break;
    power *= a2;
    ++k;
  }
  return sum;
}

/// Odd-mode sums over omega_j = (2j + 1) pi / (2T), j >= 0.
template <typename Real>
struct OddModeSums {
  Real T;
  Real x(Real tau) const { return kPi<Real> * tau / (2 * T); }
  Real scale(int p) const { return std::pow(2 * T / kPi<Real>, static_cast<Real>(p)); }
  /// sum sin(omega tau) / omega^2
  Real sin2(Real tau) const { return scale(2) * (clausen2(x(tau)) - clausen2(2 * x(tau)) / 4); }
  /// sum cos(omega tau) / omega^3
  Real cos3(Real tau) const { return scale(3) * (clausen3(x(tau)) - clausen3(2 * x(tau)) / 8); }
  /// sum sin(omega tau) / omega^4
  Real sin4(Real tau) const { return scale(4) * (clausen4(x(tau)) - clausen4(2 * x(tau)) / 16); }
};

/// weights(l, i): coefficient of node i in the second-difference pattern of hat l,
/// so that int phi_l' cos(w t) dt = sum_i weights(l, i) sin(w t_i) / w.
template <typename Real>
Matrix<Real> hat_weights(const TemporalMesh& mesh) {
  const Eigen::Index n = mesh.num_dofs();
  Matrix<Real> w = Matrix<Real>::Zero(n, n + 1);
  for (Eigen::Index l = 0; l < n; ++l) {
    const Real h0 = mesh.element_size(l);
    w(l, l) -= 1 / h0;
    w(l, l + 1) += 1 / h0;
    if (l + 1 < n) {
      const Real h1 = mesh.element_size(l + 1);
      w(l, l + 1) += 1 / h1;
      w(l, l + 2) -= 1 / h1;
    }
  }
  return w;
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> nodes_as(const TemporalMesh& mesh) {
  return mesh.nodes().template cast<Real>();
}

}  // namespace

template <typename Real>
Real clausen2(Real x) {
  const Real y = std::remainder(x, 2 * kPi<Real>);
  if (y == 0) return 0;
  const Real a = std::abs(y);
  const Real value = a - a * std::log(a) + clausen_tail<Real>(a, 0, [](int) { return Real(1); });
  return y < 0 ? -value : value;
}

template <typename Real>
Real clausen3(Real x) {
  const Real a = std::abs(std::remainder(x, 2 * kPi<Real>));
  if (a == 0) return kZeta3<Real>;
  return kZeta3<Real> - a * a * 3 / 4 + a * a * std::log(a) / 2 -
         clausen_tail<Real>(a, 1, [](int k) { return Real(2 * k + 2); });
}

template <typename Real>
Real clausen4(Real x) {
  const Real y = std::remainder(x, 2 * kPi<Real>);
  if (y == 0) return 0;
  const Real a = std::abs(y);
  const Real a3 = a * a * a;
  const Real value = kZeta3<Real> * a - a3 * 11 / 36 + a3 * std::log(a) / 6 -
                     clausen_tail<Real>(a, 2, [](int k) { return Real((2 * k + 2) * (2 * k + 3)); });
  return y < 0 ? -value : value;
}

template <typename Real>
Matrix<Real> temporal_stiffness_closed_form(const TemporalMesh& mesh) {
  const Eigen::Index n = mesh.num_dofs();
  const auto t = nodes_as<Real>(mesh);
  const Real T = t[n];
  const OddModeSums<Real> sums{T};
  Matrix<Real> kernel(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) kernel(i, j) = sums.sin2(t[i] + t[j]) + sums.sin2(t[i] - t[j]);
  }
  const Matrix<Real> w = hat_weights<Real>(mesh);
  return -(w * kernel * w.transpose()) / T;
}

template <typename Real>
ClosedFormTemporalMatrices<Real> assemble_temporal_matrices_closed_form(const TemporalMesh& mesh) {
  const Eigen::Index n = mesh.num_dofs();
  const auto t = nodes_as<Real>(mesh);
  const Real T = t[n];
  const OddModeSums<Real> sums{T};
  const Matrix<Real> w = hat_weights<Real>(mesh);

  ClosedFormTemporalMatrices<Real> out;
  out.stiffness = temporal_stiffness_closed_form<Real>(mesh);

  // mass(l, k) = sum_j sine(l, j) hat_cos(k, j) with
  //   sine(l, j)    = (2/T) sum_i w(l, i) sin(w_j t_i) / w_j^2
  //   hat_cos(k, j) = sum_i w(k, i) cos(w_j t_i) / w_j^2 + [k = n] sin(w_j T) / w_j
  Matrix<Real> sin_cos(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) sin_cos(i, j) = (sums.sin4(t[i] + t[j]) + sums.sin4(t[i] - t[j])) / 2;
  }
  out.mass = (2 / T) * w * sin_cos * w.transpose();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> last(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) last[i] = (sums.cos3(t[i] - T) - sums.cos3(t[i] + T)) / 2;
  out.mass.col(n - 1) += (2 / T) * w * last;

  // moment(m, e) = sum_j sine(m, j) (sin(w_j t_{e+1}) - sin(w_j t_e)) / w_j
  Matrix<Real> sin_sin(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) sin_sin(i, j) = (sums.cos3(t[i] - t[j]) - sums.cos3(t[i] + t[j])) / 2;
  }
  Matrix<Real> element_diff = Matrix<Real>::Zero(n + 1, n);
  for (Eigen::Index e = 0; e < n; ++e) {
    element_diff(e + 1, e) = 1;
    element_diff(e, e) = -1;
  }
  out.moment = (2 / T) * w * sin_sin * element_diff;
  return out;
}

template double clausen2<double>(double);
template long double clausen2<long double>(long double);
template double clausen3<double>(double);
template long double clausen3<long double>(long double);
template double clausen4<double>(double);
template long double clausen4<long double>(long double);
template Matrix<double> temporal_stiffness_closed_form<double>(const TemporalMesh&);
template Matrix<long double> temporal_stiffness_closed_form<long double>(const TemporalMesh&);
template ClosedFormTemporalMatrices<double> assemble_temporal_matrices_closed_form<double>(const TemporalMesh&);
template ClosedFormTemporalMatrices<long double> assemble_temporal_matrices_closed_form<long double>(
    const TemporalMesh&);

}  // namespace wavext
