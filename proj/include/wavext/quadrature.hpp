#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace wavext {

/// Quadrature rule on the unit interval [0, 1]; weights sum to one.
struct Rule1D {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return points.size(); }
};

/// Quadrature rule on the reference triangle (0,0), (1,0), (0,1).
/// Weights are area fractions and sum to one, so that
/// int_T f ~= |T| * sum_q weights[q] * f(x_q).
struct TriangleRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return weights.size(); }
};

/// n-point Gauss-Legendre rule mapped to [0, 1] (exact for degree 2n-1).
Rule1D gauss_legendre(int n);

/// Collapsed-square (Duffy) Gauss product rule with n*n points,
/// exact for polynomials of total degree 2n-2.
TriangleRule triangle_rule(int n);

/// n-point Gauss rule on each of `pieces` equal subintervals of [0, 1].
Rule1D composite_gauss(int n, int pieces);

/// triangle_rule(n) applied on each of the 4^levels congruent subtriangles
/// obtained by repeated midpoint subdivision.
TriangleRule composite_triangle_rule(int n, int levels);

/// Gauss order per direction plus optional subdivision of each integration
/// cell so that no subcell exceeds the given space or time extent.
struct CellQuadrature {
  int order = 10;
  double max_space_cell = std::numeric_limits<double>::infinity();
  double max_time_cell = std::numeric_limits<double>::infinity();
};

/// Composite Gauss rules of one order, keyed by the number of pieces.
class CompositeRuleCache {
 public:
  explicit CompositeRuleCache(int order) : order_(order) {}
  const Rule1D& get(int pieces) {
    auto it = rules_.find(pieces);
    if (it == rules_.end()) it = rules_.emplace(pieces, composite_gauss(order_, pieces)).first;
    return it->second;
  }

 private:
  int order_;
  std::map<int, Rule1D> rules_;
};

/// Number of equal pieces needed so that length / pieces <= max_piece.
int pieces_for(double length, double max_piece);

/// Rule on [0, 1] with panels graded geometrically towards both endpoints.
/// Resolves integrable endpoint singularities of log type; `levels` panels
/// per half with ratio `ratio`, each carrying an n-point Gauss rule.
Rule1D graded_rule(int n, int levels, double ratio);

/// Adaptive Gauss-Legendre panel integration of f over [a, b].
/// Panels are bisected until the 10-point estimate agrees with the sum of
/// its two halves within a share of `tol` proportional to panel width.
/// Panels whose discrepancy falls below `noise_floor` are accepted as well,
/// for integrands that carry an absolute rounding error from cancellation.
/// Throws std::runtime_error when `max_depth` is exceeded.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 60, double noise_floor = 0.0);

/// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

}  // namespace wavext
