#include "qgraph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qgraph/spectra.hpp"

namespace qgraph {

using std::numbers::pi;

namespace {

double bisect(const std::function<double(double)>& f, double a, double b,
              double fa) {
  if (fa == 0.0) return a;
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) return m;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a < 1e-16 * std::max(1.0, std::abs(b))) break;
  }
  return 0.5 * (a + b);
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-14 * std::max(1.0, b); ++iter) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

struct FrameRootResult {
  bool found = false;
  double k = 0.0;
  double residual = 0.0;
  bool degenerate = false;
  int multiplicity = 1;
};

// One bisection inside a separator interval. The regularity bound makes
// the endpoint signs opposite; if roundoff (or a marginal special point)
// spoils that, a subdivision scan recovers the bracket.
FrameRootResult root_in_interval(const SpectralModel& m, double lo, double hi,
                                 const Tolerances& tol) {
  FrameRootResult r;
  auto F = [&m](double k) { return m.F(k); };
  double f_lo = F(lo), f_hi = F(hi);
  const double eps = tol.separator_degenerate;
  // a vanishing endpoint marks a root sitting on the separator (marginal
  // special parameters); nudge inward so the bracket sign is meaningful
  if (std::abs(f_lo) < eps || std::abs(f_hi) < eps) {
    r.degenerate = true;
    const double nudge = 1e-6 * (hi - lo);
    lo += nudge;
    hi -= nudge;
    f_lo = F(lo);
    f_hi = F(hi);
  }

  double a = lo, b = hi, fa = f_lo;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    bool bracketed = false;
    const int nsub = 64;
    double prev = lo, fprev = f_lo;
    for (int i = 1; i <= nsub; ++i) {
      const double x = lo + (hi - lo) * i / nsub;
      const double fx = F(x);
      if ((fprev < 0.0) != (fx < 0.0)) {
        a = prev;
        b = x;
        fa = fprev;
        bracketed = true;
        break;
      }
      prev = x;
      fprev = fx;
    }
    if (!bracketed) return r; // no sign change anywhere in the frame
  }
  r.k = bisect(F, a, b, fa);
  r.residual = std::abs(F(r.k));
  r.found = true;
  const double sep_dist = std::min(r.k - lo, hi - r.k);
  if (sep_dist < eps * (hi - lo)) r.degenerate = true;
  return r;
}

} // namespace

RootScan find_roots(const SpectralModel& m, double k_max, ScanMethod method,
                    const Tolerances& tol) {
  RootScan scan;
  scan.k_max = k_max;
  scan.method = method;

  if (method == ScanMethod::FrameBisection) {
    if (m.cls == RegularityClass::Irregular)
      throw ClassRefusal("frame bisection requires a Regular or Marginal graph");
    if (!m.mu_set)
      throw std::logic_error("mu not determined before frame bisection");
    for (int n = 1;; ++n) {
      LevelFrame fr = separators(m, n);
      if (fr.k_lo >= k_max) break;
      const double lo = std::max(fr.k_lo, 0.0);
      if (lo >= fr.k_hi) continue;
      FrameRootResult r = root_in_interval(m, lo, fr.k_hi, tol);
      if (r.found && r.k > 0.0 && r.k <= k_max) {
        scan.roots.push_back(r.k);
        scan.residuals.push_back(r.residual);
        scan.multiplicity.push_back(r.multiplicity);
        scan.degenerate.push_back(r.degenerate);
        scan.frame.push_back(n);
      }
    }
    return scan;
  }

  // dense scan: sample F finely enough that no root pair can hide
  scan.heuristic = m.cls == RegularityClass::Irregular;
  const double step = pi / (m.S0 * tol.scan_steps * (1.0 + m.alpha));
  const auto n_samples = static_cast<long long>(std::ceil(k_max / step)) + 1;
  std::vector<double> val(n_samples);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n_samples; ++i) val[i] = m.F(i * step);

  auto F = [&m](double k) { return m.F(k); };
  const double min_sep = tol.root_separation_rel * pi / m.S0;
  for (long long i = 0; i + 1 < n_samples; ++i) {
    const double k0 = i * step, k1 = (i + 1) * step;
    if ((val[i] < 0.0) != (val[i + 1] < 0.0)) {
      const double r = bisect(F, k0, k1, val[i]);
      if (r > min_sep && r <= k_max &&
          (scan.roots.empty() || r - scan.roots.back() > min_sep)) {
        scan.roots.push_back(r);
        scan.residuals.push_back(std::abs(F(r)));
        scan.multiplicity.push_back(1);
        scan.degenerate.push_back(false);
      }
    } else if (i > 0 && std::abs(val[i]) < std::abs(val[i - 1]) &&
               std::abs(val[i]) <= std::abs(val[i + 1]) &&
               (val[i - 1] < 0.0) == (val[i + 1] < 0.0)) {
      // near-tangency: a local minimum of |F| without sign change
      const double kmin =
          golden_min([&F](double k) { return std::abs(F(k)); },
                     (i - 1) * step, k1);
      const double fmin = std::abs(F(kmin));
      if (fmin < tol.double_root && kmin > min_sep && kmin <= k_max &&
          (scan.roots.empty() || kmin - scan.roots.back() > min_sep)) {
        scan.roots.push_back(kmin);
        scan.residuals.push_back(fmin);
        scan.multiplicity.push_back(2);
        scan.degenerate.push_back(false);
      }
    }
  }
  return scan;
}

RootScan find_roots_detscan(const ScatteringAssembly& a, double k_max,
                            double alpha_hint, const Tolerances& tol) {
  RootScan scan;
  scan.k_max = k_max;
  scan.method = ScanMethod::DenseScan;

  const double step = pi / (a.S0 * tol.scan_steps * (1.0 + alpha_hint));
  const auto n_samples = static_cast<long long>(std::ceil(k_max / step)) + 1;
  std::vector<double> val(n_samples);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n_samples; ++i)
    val[i] = std::abs(a.delta_direct(i * step));

  double scale = 0.0;
  for (double v : val) scale = std::max(scale, v);
  const double accept = 1e-8 * std::max(1.0, scale);
  const double min_sep = tol.root_separation_rel * pi / a.S0;

  auto g = [&a](double k) { return std::abs(a.delta_direct(k)); };
  for (long long i = 1; i + 1 < n_samples; ++i) {
    if (val[i] <= val[i - 1] && val[i] < val[i + 1] &&
        val[i] < 0.5 * scale) {
      const double kmin = golden_min(g, (i - 1) * step, (i + 1) * step);
      const double gmin = g(kmin);
      if (gmin <= accept && kmin > 0.0 &&
          (scan.roots.empty() || kmin - scan.roots.back() > min_sep)) {
        scan.roots.push_back(kmin);
        scan.residuals.push_back(gmin);
        scan.multiplicity.push_back(1);
        scan.degenerate.push_back(false);
      }
    }
  }
  return scan;
}

int staircase_count(const RootScan& scan, double k) {
  int n = 0;
  for (size_t i = 0; i < scan.roots.size(); ++i)
    if (scan.roots[i] <= k) n += scan.multiplicity[i];
  return n;
}

double average_staircase(const SpectralModel& m, double k) {
  if (!m.mu_set) throw std::logic_error("mu not determined");
  return (m.S0 / pi) * k - (m.mu + m.gamma0 + 1.0);
}

std::vector<ConvergenceRow> convergence_study(const Graph& g,
                                              const std::vector<int>& n_list,
                                              const std::vector<int>& L_list,
                                              const Tolerances& tol) {
  ScatteringAssembly a = assemble(g);
  TrigPolynomial tp = expand_determinant(a, tol);
  SpectralModel m = extract_model(tp, a, tol);
  if (m.cls != RegularityClass::Regular)
    throw ClassRefusal("convergence study requires a Regular graph, got " +
                       to_string(m.cls));
  determine_mu(m, tol);

  int n_max = 1;
  for (int n : n_list) n_max = std::max(n_max, n);
  const double k_max = separators(m, n_max).k_hi + 1e-9;
  RootScan scan = find_roots(m, k_max, ScanMethod::FrameBisection, tol);

  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    if (n < 1 || n > static_cast<int>(scan.roots.size()))
      throw InvalidInput("oracle produced no root for level " +
                         std::to_string(n));
    for (int L : L_list) {
      ConvergenceRow row;
      row.n = n;
      row.L = L;
      row.k_oracle = scan.roots[n - 1];
      row.k_explicit =
          eigenvalue_explicit(m, a, n, L, ExplicitMode::TraceResum, tol);
      row.eps = std::abs(row.k_explicit - row.k_oracle) / row.k_oracle;
      rows.push_back(row);
    }
  }
  return rows;
}

} // namespace qgraph
