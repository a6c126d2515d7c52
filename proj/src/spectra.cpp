#include "qgraph/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qgraph/oracle.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/quadrature.hpp"

namespace qgraph {

using std::numbers::pi;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int mu_from_first_root(SpectralModel& m, const Tolerances& tol) {
  // first positive root within ten average spacings
  const double window = 10.0 * pi / m.S0;
  SpectralModel probe = m; // dense scan does not need mu
  RootScan scan = find_roots(probe, window, ScanMethod::DenseScan, tol);
  if (scan.roots.empty())
    throw SearchWindowError(
        "no positive root found in the first 10 average spacings");
  const double k1 = scan.roots.front();
  const double x = m.S0 * k1 / pi - m.gamma0 - 1.0;
  const int mu = static_cast<int>(std::floor(x));
  m.mu = mu;
  m.mu_set = true;
  return mu;
}

double intercept_fit(const SpectralModel& m, const std::vector<double>& roots) {
  // the average staircase passes through the middle of each jump
  double sum = 0.0;
  for (size_t i = 0; i < roots.size(); ++i)
    sum += (static_cast<double>(i) + 0.5) - (m.S0 / pi) * roots[i];
  return sum / static_cast<double>(roots.size());
}

} // namespace

int determine_mu_unchecked(SpectralModel& m, const Tolerances& tol) {
  return mu_from_first_root(m, tol);
}

int determine_mu(SpectralModel& m, const Tolerances& tol) {
  if (m.cls == RegularityClass::Irregular)
    throw ClassRefusal("mu determination requires Regular or Marginal, got " +
                       to_string(m.cls));
  const int mu = mu_from_first_root(m, tol);

  // Cross-check Nbar(0) = -(mu + gamma0 + 1) against a staircase intercept
  // fitted through the first 200 oracle roots.
  const double k_fit = separators(m, 200, tol).k_hi + 1e-9;
  RootScan scan = find_roots(m, k_fit, ScanMethod::DenseScan, tol);
  if (scan.roots.size() > 200) scan.roots.resize(200);
  if (scan.roots.size() >= 50) {
    const double fitted = intercept_fit(m, scan.roots);
    const double expected = -(mu + m.gamma0 + 1.0);
    if (std::abs(fitted - expected) > tol.mu_intercept)
      throw ConsistencyError("staircase intercept " + std::to_string(fitted) +
                             " disagrees with -(mu+gamma0+1) = " +
                             std::to_string(expected));
  }
  return mu;
}

LevelFrame separators(const SpectralModel& m, int n, const Tolerances& tol) {
  if (!m.mu_set) throw std::logic_error("mu not determined");
  LevelFrame f;
  f.n = n;
  const double base = n + m.mu + m.gamma0;
  f.k_lo = (pi / m.S0) * base;
  f.k_hi = (pi / m.S0) * (base + 1.0);
  f.k_avg = (pi / m.S0) * (base + 0.5);
  Classification c = classify(m, tol);
  if (c.cls == RegularityClass::Regular) {
    f.has_zone = true;
    f.zone_lo = f.k_lo + c.u;
    f.zone_hi = f.k_hi - c.u;
  }
  return f;
}

namespace {

void require_explicit_ok(const SpectralModel& m) {
  if (m.cls == RegularityClass::Irregular)
    throw ClassRefusal("explicit spectral formula refused: graph is Irregular");
  if (!m.mu_set) throw std::logic_error("mu not determined");
}

// primes sorted by (length, code): the symbolic-code summation order
std::vector<PeriodicOrbit> sorted_primes(const ScatteringAssembly& a, int L,
                                         const Tolerances& tol) {
  auto primes = enumerate_primes(a, L, tol);
  std::sort(primes.begin(), primes.end(),
            [](const PeriodicOrbit& x, const PeriodicOrbit& y) {
              if (x.length != y.length) return x.length < y.length;
              return x.code < y.code;
            });
  return primes;
}

} // namespace

double eigenvalue_explicit(const SpectralModel& m, const ScatteringAssembly& a,
                           int n, int L, ExplicitMode mode,
                           const Tolerances& tol) {
  require_explicit_ok(m);
  const LevelFrame fr = separators(m, n, tol);

  if (mode == ExplicitMode::TraceResum) {
    const double fluct = integrate_adaptive(
        [&a, L](double k) { return staircase_fluctuation(a, k, L); }, fr.k_lo,
        fr.k_hi, tol.quad_abstol);
    return fr.k_avg - fluct;
  }

  if (L > tol.prime_sum_cap)
    throw ResourceCap("prime-sum truncation L=" + std::to_string(L) +
                      " exceeds cap " + std::to_string(tol.prime_sum_cap) +
                      "; use trace-resum");
  const auto primes = sorted_primes(a, L, tol);
  double k = fr.k_avg;
  // summed by total symbolic code length m = nu * l_p
  for (int mlen = 1; mlen <= L; ++mlen) {
    for (const auto& p : primes) {
      if (mlen % p.length != 0) continue;
      const int nu = mlen / p.length;
      const double omega = pi * p.action / m.S0;
      const cplx anu = std::pow(p.weight, nu);
      const cplx osc = anu * std::exp(cplx(0.0, nu * p.action * fr.k_avg));
      k -= (2.0 / (pi * p.action * nu * nu)) * std::sin(0.5 * nu * omega) *
           osc.imag();
    }
  }
  return k;
}

double eigenvalue_simplified(const SpectralModel& m,
                             const ScatteringAssembly& a, int n, int L,
                             ExplicitMode mode, const Tolerances& tol) {
  require_explicit_ok(m);
  std::vector<std::string> failed;
  for (int v = 0; v < a.graph.n_vertices(); ++v) {
    const auto& c = a.graph.condition(v);
    if (!c.is_dirichlet() && c.lambda0 != 0.0) {
      failed.push_back("vertex " + std::to_string(v) + " has lambda0 != 0");
      break;
    }
  }
  for (const auto& b : a.graph.bonds())
    if (b.A != 0.0) {
      failed.push_back("nonzero magnetic constant");
      break;
    }
  if (a.T.imag().cwiseAbs().maxCoeff() > 1e-14)
    failed.push_back("orbit weights are not real");
  if (std::abs(m.mu + m.gamma0 + 0.5) > 1e-12)
    failed.push_back("mu + gamma0 + 1/2 != 0");
  if (!failed.empty()) {
    std::string msg = "sine-form reduction does not apply:";
    for (const auto& f : failed) msg += " " + f + ";";
    throw InvalidInput(msg);
  }

  const double base = pi * n / m.S0;
  if (mode == ExplicitMode::TraceResum) {
    const LevelFrame fr = separators(m, n, tol);
    const double fluct = integrate_adaptive(
        [&a, L](double k) { return staircase_fluctuation(a, k, L); }, fr.k_lo,
        fr.k_hi, tol.quad_abstol);
    return base - fluct;
  }

  if (L > tol.prime_sum_cap)
    throw ResourceCap("prime-sum truncation L=" + std::to_string(L) +
                      " exceeds cap " + std::to_string(tol.prime_sum_cap) +
                      "; use trace-resum");
  const auto primes = sorted_primes(a, L, tol);
  double k = base;
  for (int mlen = 1; mlen <= L; ++mlen) {
    for (const auto& p : primes) {
      if (mlen % p.length != 0) continue;
      const int nu = mlen / p.length;
      const double omega = pi * p.action / m.S0;
      const double anu = std::pow(p.weight.real(), nu);
      k -= (2.0 / pi) * (anu / (p.action * nu * nu)) *
           std::sin(0.5 * nu * omega) * std::sin(nu * omega * n);
    }
  }
  return k;
}

ImplicitResult eigenvalue_implicit(const SpectralModel& m, int n, double tol_k,
                                   const Tolerances& tol) {
  if (m.cls != RegularityClass::Regular)
    throw ClassRefusal("implicit level equation requires a Regular graph, got " +
                       to_string(m.cls));
  if (!m.mu_set) throw std::logic_error("mu not determined");

  const LevelFrame fr = separators(m, n, tol);
  const bool even = ((n + m.mu) % 2) == 0;
  const double base = (pi / m.S0) * (n + m.mu + m.gamma0);
  const double guard = 1e-15 * (fr.k_hi - fr.k_lo);

  ImplicitResult res;
  double k = fr.k_avg;
  for (res.iterations = 0; res.iterations < tol.implicit_max_iter;
       ++res.iterations) {
    double phi = std::clamp(m.phi(k), -1.0, 1.0);
    double branch = even ? std::acos(phi) : pi - std::acos(phi);
    double next = base + branch / m.S0;
    next = std::clamp(next, fr.k_lo + guard, fr.k_hi - guard);
    const double dk = std::abs(next - k);
    k = next;
    if (dk <= tol_k) {
      res.k = k;
      return res;
    }
  }

  // non-convergence: bisection on F within the frame
  res.bisect_fallback = true;
  double a = fr.k_lo + guard, b = fr.k_hi - guard;
  double fa = m.F(a);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = m.F(mid);
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a < tol_k) break;
  }
  res.k = 0.5 * (a + b);
  return res;
}

double moment(const SpectralModel& m, const ScatteringAssembly& a, int power,
              int n, int L, const Tolerances& tol) {
  require_explicit_ok(m);
  if (power < 1 || power > 2)
    throw InvalidInput("moment supports powers 1 and 2");
  const LevelFrame fr = separators(m, n, tol);

  auto f = [power](double k) { return power == 1 ? k : k * k; };
  auto df = [power](double k) { return power == 1 ? 1.0 : 2.0 * k; };
  auto integrand = [&](double k) {
    return df(k) * (average_staircase(m, k) + staircase_fluctuation(a, k, L));
  };
  const double scale =
      std::max(1.0, std::abs(f(fr.k_hi)) * std::max(1, n));
  const double integral = integrate_adaptive(
      integrand, fr.k_lo, fr.k_hi, std::max(tol.quad_abstol, 1e-14 * scale));
  return f(fr.k_hi) * n - f(fr.k_lo) * (n - 1) - integral;
}

std::vector<LevelRecord> spectrum_table(const SpectralModel& m_in,
                                        const ScatteringAssembly& a,
                                        const SpectrumOptions& opt,
                                        const Tolerances& tol) {
  SpectralModel m = m_in;
  if (!m.mu_set) {
    if (m.cls == RegularityClass::Irregular)
      determine_mu_unchecked(m, tol);
    else
      determine_mu(m, tol);
  }
  if ((opt.want_explicit || opt.want_implicit) &&
      m.cls == RegularityClass::Irregular)
    throw ClassRefusal(
        "explicit/implicit spectral methods refused: graph is Irregular");

  const double k_max = separators(m, opt.n_max, tol).k_hi + 1e-12;
  RootScan scan;
  if (opt.want_oracle || opt.want_explicit) {
    scan = (m.cls == RegularityClass::Irregular)
               ? find_roots(m, k_max, ScanMethod::DenseScan, tol)
               : find_roots(m, k_max, ScanMethod::FrameBisection, tol);
  }

  std::vector<LevelRecord> rows(opt.n_max);
#pragma omp parallel for schedule(dynamic)
  for (int n = 1; n <= opt.n_max; ++n) {
    LevelRecord& row = rows[n - 1];
    row.n = n;
    const LevelFrame fr = separators(m, n, tol);
    row.khat_lo = fr.k_lo;
    row.khat_hi = fr.k_hi;
    row.k_explicit = row.k_implicit = row.k_oracle = kNaN;
    row.rel_err_explicit = row.residual = kNaN;

    bool degenerate = false;
    if (opt.want_oracle || opt.want_explicit) {
      if (scan.method == ScanMethod::FrameBisection) {
        bool hit = false;
        for (size_t i = 0; i < scan.roots.size(); ++i)
          if (scan.frame[i] == n) {
            row.k_oracle = scan.roots[i];
            degenerate = scan.degenerate[i];
            hit = true;
          }
        if (!hit) {
          // marginal special parameters: the root sits on a separator and
          // the frame bisection cannot claim it
          row.flags += "no-root;";
          degenerate = true;
        }
      } else {
        int hits = 0;
        for (size_t i = 0; i < scan.roots.size(); ++i)
          if (scan.roots[i] > fr.k_lo && scan.roots[i] <= fr.k_hi) {
            row.k_oracle = scan.roots[i];
            ++hits;
          }
        if (hits > 1) row.flags += "multi-root;";
        if (hits == 0) row.flags += "no-root;";
      }
    }
    if (degenerate) row.flags += "separator-degenerate;";

    if (opt.want_explicit && !degenerate) {
      row.k_explicit =
          eigenvalue_explicit(m, a, n, opt.L, ExplicitMode::TraceResum, tol);
      row.residual = std::abs(m.F(row.k_explicit));
      if (!std::isnan(row.k_oracle))
        row.rel_err_explicit =
            std::abs(row.k_explicit - row.k_oracle) / row.k_oracle;
    }
    if (opt.want_implicit) {
      if (m.cls == RegularityClass::Regular) {
        ImplicitResult ir = eigenvalue_implicit(m, n, tol.implicit_tol, tol);
        row.k_implicit = ir.k;
        if (ir.bisect_fallback) row.flags += "bisect-fallback;";
      } else {
        row.flags += "implicit-refused;";
      }
    }
  }
  return rows;
}

} // namespace qgraph
