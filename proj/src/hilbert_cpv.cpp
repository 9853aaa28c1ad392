#include "wavext/quadrature.hpp"
#include "wavext/temporal_hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wavext {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

PiecewiseSmooth hat_function(const TemporalMesh& mesh, Eigen::Index l) {
  if (l < 1 || l > mesh.num_dofs()) throw std::out_of_range("hat_function: index out of range");
  const Eigen::VectorXd& t = mesh.nodes();
  const double a = t[l - 1];
  const double m = t[l];
  const double b = (l < mesh.num_dofs()) ? t[l + 1] : m;
  PiecewiseSmooth f;
  f.eval = [a, m, b](double s) {
    if (s <= a || s > b) return 0.0;
    if (s <= m) return (s - a) / (m - a);
    return (b - s) / (b - m);
  };
  f.breakpoints = {a, m, b};
  f.support_begin = a;
  f.support_end = b;
  return f;
}

PiecewiseSmooth hat_derivative(const TemporalMesh& mesh, Eigen::Index l) {
  if (l < 1 || l > mesh.num_dofs()) throw std::out_of_range("hat_derivative: index out of range");
  const Eigen::VectorXd& t = mesh.nodes();
  const double a = t[l - 1];
  const double m = t[l];
  const double b = (l < mesh.num_dofs()) ? t[l + 1] : m;
  PiecewiseSmooth f;
  f.eval = [a, m, b](double s) {
    if (s <= a || s > b) return 0.0;
    if (s <= m) return 1.0 / (m - a);
    return -1.0 / (b - m);
  };
  f.breakpoints = {a, m, b};
  f.support_begin = a;
  f.support_end = b;
  return f;
}

double hilbert_apply_cpv(const PiecewiseSmooth& u, double horizon, double t, double tol) {
  const double T = horizon;
  if (!(t > 0.0 && t < T)) throw std::domain_error("hilbert_apply_cpv: t must lie strictly inside (0, T)");
  const double c = kPi / (2.0 * T);
  const double mid = 0.5 * T;
  const double ut = u.eval(t);
  // One-sided end values; 1/sin(c (s + t)) is nearly singular at s = 0 when
  // t is small and at s = T when t is close to T.
  const double u0 = u.eval(std::nextafter(0.0, T));
  const double uT = u.eval(T);
  const double lo = std::max(0.0, u.support_begin);
  const double hi = std::min(T, u.support_end);

  // Antiderivatives of 1/sin(c (s -+ t)), up to the factor 1/c.
  auto log_minus = [&](double s) { return std::log(std::abs(std::tan(0.5 * c * (s - t)))); };
  auto log_plus = [&](double s) {
    if (s + t <= T) return std::log(std::abs(std::tan(0.5 * c * (s + t))));
    return -std::log(std::abs(std::tan(0.5 * c * ((T - s) + (T - t)))));
  };
  auto end_value = [&](double a) { return a < mid ? u0 : uT; };
  // sin(c (s + t)) = sin(c ((T - s) + (T - t))), evaluated on the side where the
  // argument stays away from pi.
  auto sin_plus = [&](double s) {
    return (s + t <= T) ? std::sin(c * (s + t)) : std::sin(c * ((T - s) + (T - t)));
  };

  std::vector<double> cuts{0.0, mid, T, t};
  if (lo > 0.0 && lo < T) cuts.push_back(lo);
  if (hi > 0.0 && hi < T) cuts.push_back(hi);
  for (double b : u.breakpoints) {
    if (b > 0.0 && b < T) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double panel_tol = tol * 2.0 * T / static_cast<double>(cuts.size());
  // u(s) - u(t) and u(s) - u(T) cancel near their singular points; the quotient
  // then carries an absolute error of order eps * |u| / c per panel.
  const double u_scale = std::max({std::abs(ut), std::abs(u0), std::abs(uT), 1.0});
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * u_scale / c;
  double regular = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double b = cuts[p + 1];
    const double ue = end_value(a);
    if (b <= lo || a >= hi) {
      if (ut != 0.0) {
        if (a == t || b == t) {
          throw std::domain_error("hilbert_apply_cpv: principal value diverges at a jump of u");
        }
        regular -= ut * (log_minus(b) - log_minus(a)) / c;
      }
      if (ue != 0.0) regular -= ue * (log_plus(b) - log_plus(a)) / c;
      continue;
    }
    auto integrand = [&](double s) {
      const double us = u.eval(s);
      return (us - ut) / std::sin(c * (s - t)) + (us - ue) / sin_plus(s);
    };
    regular += integrate_adaptive(integrand, a, b, panel_tol, 60, floor);
  }
  const double singular = (ut * (log_minus(T) - log_minus(0.0)) + u0 * (log_plus(mid) - log_plus(0.0)) +
                           uT * (log_plus(T) - log_plus(mid))) /
                          c;
  return (regular + singular) / (2.0 * T);
}

TemporalMatrices assemble_temporal_matrices_cpv(const TemporalMesh& mesh, const CpvAssemblyOptions& options) {
  const Eigen::Index n = mesh.num_dofs();
  const double T = mesh.horizon();
  // Images of hats and hat derivatives carry log-type singularities at the
  // mesh nodes, so each element gets a rule graded towards both ends.
  const Rule1D rule = graded_rule(options.order, options.levels, options.ratio);
  const double tol = options.tol;

  std::vector<PiecewiseSmooth> hats, derivs;
  for (Eigen::Index l = 1; l <= n; ++l) {
    hats.push_back(hat_function(mesh, l));
    derivs.push_back(hat_derivative(mesh, l));
  }

  TemporalMatrices out;
  out.mass = Eigen::MatrixXd::Zero(n, n);
  out.stiffness = Eigen::MatrixXd::Zero(n, n);
  out.moment = Eigen::MatrixXd::Zero(n, n);

  for (Eigen::Index e = 0; e < n; ++e) {
    const double a = mesh.nodes()[e];
    const double h = mesh.element_size(e);
    // Hats touching element e: index e (falling part, 0-based hat e-1) and e+1 (rising).
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      const double s = a + h * rule.points[q];
      const double w = h * rule.weights[q];
      Eigen::VectorXd h_hat(n), h_deriv(n);
      for (Eigen::Index m = 0; m < n; ++m) {
        h_hat[m] = hilbert_apply_cpv(hats[static_cast<std::size_t>(m)], T, s, tol);
        h_deriv[m] = hilbert_apply_cpv(derivs[static_cast<std::size_t>(m)], T, s, tol);
      }
      out.moment.col(e) += w * h_hat;
      for (Eigen::Index k : {e - 1, e}) {
        if (k < 0) continue;
        const double phi_k = hats[static_cast<std::size_t>(k)].eval(s);
        const double dphi_k = derivs[static_cast<std::size_t>(k)].eval(s);
        // mass[l,k] = <phi_k, H phi_l>, stiffness[l,k] = <H phi_k', phi_l'>
        out.mass.col(k) += w * phi_k * h_hat;
        out.stiffness.row(k) += w * dphi_k * h_deriv.transpose();
      }
    }
  }
  return out;
}

}  // namespace wavext
