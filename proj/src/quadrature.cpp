#include "qgraph/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace qgraph {

namespace {

constexpr int kDegree = 20;

struct GaussRule {
  std::array<double, kDegree> x{}; // nodes on [-1, 1]
  std::array<double, kDegree> w{};
};

// Nodes by Newton iteration on P_20; exact to machine precision.
GaussRule make_rule() {
  GaussRule r;
  const int n = kDegree;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

double panel(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kDegree; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double abstol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double split = left + right;
  if (std::abs(split - whole) <= abstol || depth <= 0) return split;
  return adapt(f, a, mid, left, 0.5 * abstol, depth - 1) +
         adapt(f, mid, b, right, 0.5 * abstol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abstol, int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, panel(f, a, b), abstol, max_depth);
}

} // namespace qgraph
