#pragma once

#include <string>
#include <vector>

#include "qgraph/charpoly.hpp"
#include "qgraph/scattering.hpp"
#include "qgraph/tolerances.hpp"

namespace qgraph {

struct ClassRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SearchWindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root bracket n: the separators khat_{n-1}, khat_n, the average root, and
// (Regular graphs) the narrower allowed zone.
struct LevelFrame {
  int n = 0;
  double k_lo = 0.0;  // khat_{n-1}
  double k_hi = 0.0;  // khat_n
  double k_avg = 0.0; // midpoint
  bool has_zone = false;
  double zone_lo = 0.0;
  double zone_hi = 0.0;
};

// Locates the first positive root, fixes the integer mu so that it falls in
// frame 1, and cross-checks Nbar(0) = -(mu + gamma0 + 1) against a staircase
// intercept fit over the first 200 roots. Regular or Marginal class only.
int determine_mu(SpectralModel& m,
                 const Tolerances& tol = default_tolerances());
// Same procedure without the class gate; used for irregular-staircase
// diagnostics where the frames are only a probe.
int determine_mu_unchecked(SpectralModel& m,
                           const Tolerances& tol = default_tolerances());

LevelFrame separators(const SpectralModel& m, int n,
                      const Tolerances& tol = default_tolerances());

enum class ExplicitMode { PrimeSum, TraceResum };

// The explicit periodic-orbit eigenvalue expansion, truncated at symbolic
// code length L (repetitions of a prime p enter while nu*l_p <= L).
// PrimeSum evaluates the orbit series literally; TraceResum evaluates the
// identical truncation as k_avg - integral of the staircase fluctuation.
double eigenvalue_explicit(const SpectralModel& m, const ScatteringAssembly& a,
                           int n, int L, ExplicitMode mode,
                           const Tolerances& tol = default_tolerances());

// Sine-form reduction, valid when every non-Dirichlet vertex has lambda0=0,
// all A vanish, all orbit weights are real, and mu+gamma0+1/2 == 0.
double eigenvalue_simplified(const SpectralModel& m,
                             const ScatteringAssembly& a, int n, int L,
                             ExplicitMode mode = ExplicitMode::PrimeSum,
                             const Tolerances& tol = default_tolerances());

struct ImplicitResult {
  double k = 0.0;
  int iterations = 0;
  bool bisect_fallback = false;
};

// Fixed-point iteration of the implicit level equation, parity branch by
// (n + mu), seeded at the average root and clamped to the frame.
ImplicitResult eigenvalue_implicit(const SpectralModel& m, int n,
                                   double tol_k = 1e-12,
                                   const Tolerances& tol = default_tolerances());

// Periodic-orbit moment of f(k) = k^power over frame n (TraceResum route):
//   f(khat_n) n - f(khat_{n-1}) (n-1) - integral f'(k) N_L(k) dk
double moment(const SpectralModel& m, const ScatteringAssembly& a, int power,
              int n, int L, const Tolerances& tol = default_tolerances());

struct LevelRecord {
  int n = 0;
  double khat_lo = 0.0;
  double khat_hi = 0.0;
  double k_explicit = 0.0; // NaN when withheld / not requested
  double k_implicit = 0.0;
  double k_oracle = 0.0;
  double rel_err_explicit = 0.0;
  double residual = 0.0; // |F| at the explicit value
  std::string flags;
};

struct SpectrumOptions {
  int n_max = 100;
  int L = 150;
  bool want_explicit = true;
  bool want_implicit = true;
  bool want_oracle = true;
};

// Shared per-level pipeline behind the spectrum CLI and the tests.
// Levels whose oracle root sits within tolerance of a separator are flagged
// separator-degenerate and their explicit value is withheld.
std::vector<LevelRecord> spectrum_table(
    const SpectralModel& m, const ScatteringAssembly& a,
    const SpectrumOptions& opt, const Tolerances& tol = default_tolerances());

} // namespace qgraph
