#include "qgraph/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qgraph {

using std::numbers::pi;

std::string PeriodicOrbit::code_string() const {
  std::string s;
  for (size_t i = 0; i < code.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(code[i]);
  }
  return s;
}

std::vector<std::vector<std::uint8_t>> admissibility(
    const ScatteringAssembly& a, const Tolerances& tol) {
  const int dim = a.dim();
  std::vector<std::vector<std::uint8_t>> M(dim,
                                           std::vector<std::uint8_t>(dim, 0));
  for (int J = 0; J < dim; ++J)
    for (int I = 0; I < dim; ++I)
      M[J][I] = std::abs(a.T(J, I)) > tol.coeff_drop ? 1 : 0;
  return M;
}

namespace {

// Integer matrix power traces with overflow guard; entries stay exact.
std::vector<long long> walk_counts(
    const std::vector<std::vector<std::uint8_t>>& M, int l_max) {
  const int n = static_cast<int>(M.size());
  std::vector<std::vector<long long>> P(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P[i][j] = M[i][j];
  std::vector<long long> tr(l_max + 1, 0);
  constexpr long long kGuard = 1ll << 58;
  for (int l = 1; l <= l_max; ++l) {
    long long t = 0;
    for (int i = 0; i < n; ++i) t += P[i][i];
    tr[l] = t;
    if (l == l_max) break;
    std::vector<std::vector<long long>> Q(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const long long v = P[i][k];
        if (!v) continue;
        for (int j = 0; j < n; ++j) {
          Q[i][j] += v * (M[k][j] ? 1 : 0);
          if (Q[i][j] > kGuard)
            throw ResourceCap("walk counts overflow at length " +
                              std::to_string(l + 1));
        }
      }
    P.swap(Q);
  }
  return tr;
}

std::vector<int> divisors(int n) {
  std::vector<int> d;
  for (int i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

int moebius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  if (n > 1) result = -result;
  return result;
}

} // namespace

std::vector<int> canonical_rotation(std::span<const int> code) {
  const size_t n = code.size();
  std::vector<int> best(code.begin(), code.end());
  std::vector<int> rot(n);
  for (size_t s = 1; s < n; ++s) {
    for (size_t i = 0; i < n; ++i) rot[i] = code[(s + i) % n];
    if (rot < best) best = rot;
  }
  return best;
}

bool is_primitive(std::span<const int> code) {
  const size_t n = code.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (size_t i = p; i < n && periodic; ++i)
      if (code[i] != code[i - p]) periodic = false;
    if (periodic) return false;
  }
  return true;
}

double orbit_action(const ScatteringAssembly& a, std::span<const int> code) {
  double s = 0.0;
  for (int I : code) s += a.dbonds[I].beta * a.dbonds[I].L;
  return s;
}

cplx orbit_weight(const ScatteringAssembly& a, std::span<const int> code,
                  const Tolerances& tol) {
  const size_t n = code.size();
  cplx w = 1.0;
  double mag_phase = 0.0;
  for (size_t t = 0; t < n; ++t) {
    const int I = code[t];
    const int J = code[(t + 1) % n];
    const cplx sig = a.T(J, I);
    if (std::abs(sig) <= tol.coeff_drop)
      throw InvalidInput("inadmissible transition " + std::to_string(I) +
                         " -> " + std::to_string(J));
    w *= sig;
    mag_phase += a.dbonds[I].A * a.dbonds[I].L;
  }
  return w * std::exp(cplx(0.0, mag_phase));
}

std::vector<PeriodicOrbit> enumerate_primes(const ScatteringAssembly& a,
                                            int l_max, const Tolerances& tol) {
  if (l_max < 1) return {};
  const auto M = admissibility(a, tol);
  const int dim = a.dim();

  // cheap count estimate before committing memory
  {
    auto walks = walk_counts(M, l_max);
    double est = 0.0;
    for (int l = 1; l <= l_max; ++l)
      est += static_cast<double>(walks[l]) / l;
    if (est > tol.orbit_cap)
      throw ResourceCap("estimated orbit count " + std::to_string(est) +
                        " exceeds cap " + std::to_string(tol.orbit_cap));
  }

  std::vector<PeriodicOrbit> out;
  std::vector<int> w(l_max);

  // Lyndon-word DFS (necklace generation restricted to admissible
  // transitions): at depth t the word w[0..t-1] is a pre-necklace with
  // longest Lyndon-prefix period p; it is emitted when p == t and the
  // wrap-around transition is admissible.
  auto emit = [&](int t) {
    PeriodicOrbit orb;
    orb.code.assign(w.begin(), w.begin() + t);
    orb.length = t;
    orb.prime = true;
    orb.action = orbit_action(a, orb.code);
    orb.weight = orbit_weight(a, orb.code, tol);
    out.push_back(std::move(orb));
  };

  auto dfs = [&](auto&& self, int t, int p) -> void {
    if (p == t && M[w[0]][w[t - 1]]) emit(t);
    if (t == l_max) return;
    const int base = w[t - p];
    for (int c = base; c < dim; ++c) {
      if (!M[c][w[t - 1]]) continue;
      w[t] = c;
      self(self, t + 1, c == base ? p : t + 1);
    }
  };

  for (int s = 0; s < dim; ++s) {
    w[0] = s;
    dfs(dfs, 1, 1);
  }
  return out;
}

cplx trace_term(const ScatteringAssembly& a, int m, double k) {
  Eigen::MatrixXcd S = a.S_of_k(k);
  Eigen::MatrixXcd P = S;
  for (int i = 1; i < m; ++i) P = P * S;
  return P.trace() / static_cast<double>(m);
}

std::vector<cplx> trace_terms_upto(const ScatteringAssembly& a, int L,
                                   double k) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.S_of_k(k), false);
  const auto& ev = es.eigenvalues();
  std::vector<cplx> pw(ev.size());
  for (int i = 0; i < ev.size(); ++i) pw[i] = 1.0;
  std::vector<cplx> out(L);
  for (int m = 1; m <= L; ++m) {
    cplx tr = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      pw[i] *= ev(i);
      tr += pw[i];
    }
    out[m - 1] = tr / static_cast<double>(m);
  }
  return out;
}

cplx trace_from_orbits(const std::vector<PeriodicOrbit>& primes, int m,
                       double k) {
  cplx sum = 0.0;
  for (const auto& p : primes) {
    if (m % p.length != 0) continue;
    const int nu = m / p.length;
    sum += static_cast<double>(p.length) * std::pow(p.weight, nu) *
           std::exp(cplx(0.0, nu * p.action * k));
  }
  return sum;
}

double staircase_fluctuation(const ScatteringAssembly& a, double k, int L) {
  if (L < 1) return 0.0;
  const auto terms = trace_terms_upto(a, L, k);
  cplx sum = 0.0;
  for (const auto& t : terms) sum += t;
  return sum.imag() / pi;
}

OrbitCensus orbit_census(const ScatteringAssembly& a, int l_max,
                         const Tolerances& tol) {
  OrbitCensus c;
  c.l_max = l_max;
  const auto M = admissibility(a, tol);
  auto walks = walk_counts(M, l_max);
  c.closed_walks.assign(walks.begin() + 1, walks.end());

  c.prime_counts.resize(l_max);
  for (int l = 1; l <= l_max; ++l) {
    long long sum = 0;
    for (int d : divisors(l)) sum += moebius(d) * walks[l / d];
    c.prime_counts[l - 1] = sum / l;
  }

  // Cumulative closed-walk counts grow like rho^l; the topological-entropy
  // limit is read off as the log-slope over the upper half of the window,
  // which cancels the finite-l prefactor that a plain ln#/l retains.
  std::vector<double> cum(l_max + 1, 0.0);
  for (int l = 1; l <= l_max; ++l)
    cum[l] = cum[l - 1] + static_cast<double>(walks[l]);
  int lo = std::max(1, l_max / 2);
  while (lo < l_max && cum[lo] == 0.0) ++lo;
  if (cum[l_max] > 0.0 && lo < l_max)
    c.entropy_estimate = (std::log(cum[l_max]) - std::log(cum[lo])) /
                         static_cast<double>(l_max - lo);

  const int n = a.dim();
  Eigen::MatrixXd adj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj(i, j) = M[i][j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(adj, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  c.log_spectral_radius = rho > 0.0 ? std::log(rho) : 0.0;
  return c;
}

} // namespace qgraph
