#include "wavext/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavext {

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Rule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

TriangleRule triangle_rule(int n) {
  const Rule1D g = gauss_legendre(n);
  TriangleRule rule;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  Eigen::Index q = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j, ++q) {
      const double u = g.points[i];
      const double v = g.points[j];
      rule.points(q, 0) = u;
      rule.points(q, 1) = v * (1.0 - u);
      rule.weights[q] = 2.0 * g.weights[i] * g.weights[j] * (1.0 - u);
    }
  }
  return rule;
}

Rule1D composite_gauss(int n, int pieces) {
  if (pieces < 1) throw std::invalid_argument("composite_gauss: pieces must be >= 1");
  const Rule1D g = gauss_legendre(n);
  Rule1D rule;
  rule.points.resize(n * pieces);
  rule.weights.resize(n * pieces);
  for (int p = 0; p < pieces; ++p) {
    rule.points.segment(p * n, n) = (g.points.array() + p) / pieces;
    rule.weights.segment(p * n, n) = g.weights / pieces;
  }
  return rule;
}

TriangleRule composite_triangle_rule(int n, int levels) {
  if (levels < 0) throw std::invalid_argument("composite_triangle_rule: levels must be >= 0");
  using Tri = Eigen::Matrix<double, 3, 2>;  // rows are vertices
  std::vector<Tri> tris{(Tri() << 0, 0, 1, 0, 0, 1).finished()};
  for (int l = 0; l < levels; ++l) {
    std::vector<Tri> next;
    next.reserve(4 * tris.size());
    for (const Tri& t : tris) {
      const Eigen::RowVector2d ab = 0.5 * (t.row(0) + t.row(1));
      const Eigen::RowVector2d bc = 0.5 * (t.row(1) + t.row(2));
      const Eigen::RowVector2d ca = 0.5 * (t.row(2) + t.row(0));
      Tri c;
      c << t.row(0), ab, ca;
      next.push_back(c);
      c << ab, t.row(1), bc;
      next.push_back(c);
      c << ca, bc, t.row(2);
      next.push_back(c);
      c << ab, bc, ca;
      next.push_back(c);
    }
    tris = std::move(next);
  }
  const TriangleRule base = triangle_rule(n);
  TriangleRule rule;
  const Eigen::Index m = base.size();
  rule.points.resize(m * static_cast<Eigen::Index>(tris.size()), 2);
  rule.weights.resize(m * static_cast<Eigen::Index>(tris.size()));
  const double scale = 1.0 / static_cast<double>(tris.size());
  Eigen::Index q = 0;
  for (const Tri& t : tris) {
    for (Eigen::Index i = 0; i < m; ++i, ++q) {
      rule.points.row(q) = t.row(0) + base.points(i, 0) * (t.row(1) - t.row(0)) +
                           base.points(i, 1) * (t.row(2) - t.row(0));
      rule.weights[q] = scale * base.weights[i];
    }
  }
  return rule;
}

int pieces_for(double length, double max_piece) {
  if (!std::isfinite(max_piece) || length <= max_piece) return 1;
  return static_cast<int>(std::ceil(length / max_piece - 1e-12));
}

Rule1D graded_rule(int n, int levels, double ratio) {
  if (levels < 1 || !(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("graded_rule: need levels >= 1 and 0 < ratio < 1");
  }
  const Rule1D g = gauss_legendre(n);
  // Breakpoints of [0, 1/2], graded towards 0.
  std::vector<double> cuts{0.0};
  for (int l = levels; l >= 1; --l) cuts.push_back(0.5 * std::pow(ratio, l));
  cuts.push_back(0.5);
  const Eigen::Index panels = static_cast<Eigen::Index>(cuts.size()) - 1;
  Rule1D rule;
  rule.points.resize(2 * panels * n);
  rule.weights.resize(2 * panels * n);
  Eigen::Index q = 0;
  for (Eigen::Index p = 0; p < panels; ++p) {
    const double a = cuts[p];
    const double w = cuts[p + 1] - a;
    for (int i = 0; i < n; ++i, ++q) {
      rule.points[q] = a + w * g.points[i];
      rule.weights[q] = w * g.weights[i];
    }
  }
  const Eigen::Index half = q;
  for (Eigen::Index i = 0; i < half; ++i) {
    rule.points[half + i] = 1.0 - rule.points[half - 1 - i];
    rule.weights[half + i] = rule.weights[half - 1 - i];
  }
  return rule;
}

namespace {

const Rule1D& panel_rule() {
  static const Rule1D rule = gauss_legendre(10);
  return rule;
}

struct PanelSum {
  double value = 0.0;
  double magnitude = 0.0;
};

PanelSum panel(const std::function<double(double)>& f, double a, double b) {
  const Rule1D& g = panel_rule();
  PanelSum s;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double v = g.weights[i] * f(a + (b - a) * g.points[i]);
    s.value += v;
    s.magnitude += std::abs(v);
  }
  s.value *= (b - a);
  s.magnitude *= (b - a);
  return s;
}

double refine(const std::function<double(double)>& f, double a, double b, const PanelSum& whole,
              double tol, double floor, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const PanelSum left = panel(f, a, m);
  const PanelSum right = panel(f, m, b);
  const double sum = left.value + right.value;
  const double diff = std::abs(sum - whole.value);
  // Below roughly 100 ulp of the integrand magnitude the estimate is rounding noise.
  const double noise = 100.0 * std::numeric_limits<double>::epsilon() * (left.magnitude + right.magnitude);
  if (diff <= std::max(tol, floor) || diff <= noise) return sum;
  if (depth >= max_depth) {
    throw std::runtime_error("integrate_adaptive: no convergence within maximum depth");
  }
  return refine(f, a, m, left, 0.5 * tol, floor, depth + 1, max_depth) +
         refine(f, m, b, right, 0.5 * tol, floor, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth, double noise_floor) {
  if (a == b) return 0.0;
  return refine(f, a, b, panel(f, a, b), tol, noise_floor, 0, max_depth);
}

}  // namespace wavext
