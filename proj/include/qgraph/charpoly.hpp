#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qgraph/scattering.hpp"
#include "qgraph/tolerances.hpp"

namespace qgraph {

struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One exponential term of det[1 - S(k)]. The directed-bond subset mask is
// the exact term identity; the frequency is derived from it.
struct TrigTerm {
  std::uint32_t subset = 0;
  double freq = 0.0; // sum of beta_I * L_I over the subset
  cplx coeff;
};

struct TrigPolynomial {
  int n_directed = 0;
  std::vector<TrigTerm> terms; // ascending subset mask
  cplx eval(double k) const;
};

// Principal-minor expansion over directed-bond subsets. Throws SizeError
// when 2*N_B exceeds tol.subset_cap.
TrigPolynomial expand_determinant(const ScatteringAssembly& a,
                                  const Tolerances& tol = default_tolerances());
// Single-threaded reference, kept for validating the parallel kernel.
TrigPolynomial expand_determinant_serial(
    const ScatteringAssembly& a, const Tolerances& tol = default_tolerances());

enum class RegularityClass { Regular, Marginal, Irregular };
std::string to_string(RegularityClass c);

struct ModelTerm {
  double a = 0.0;     // signed amplitude
  double S = 0.0;     // frequency, >= 0
  double gamma = 0.0; // phase/pi, in [0, 1)
};

// The spectral equation in cosine form:
//   cos(S0 k - pi gamma0) = Phi(k) = sum a_i cos(S_i k - pi gamma_i)
struct SpectralModel {
  double S0 = 0.0;
  double gamma0 = 0.0; // absolute value as assembled; only mod 2 enters cos
  std::vector<ModelTerm> terms;
  double alpha = 0.0; // sum |a_i|
  RegularityClass cls = RegularityClass::Regular;
  int mu = 0; // set by determine_mu
  bool mu_set = false;

  double phi(double k) const;
  // F(k) = cos(S0 k - pi gamma0) - Phi(k); its zeros are the spectrum
  double F(double k) const;
};

SpectralModel extract_model(const TrigPolynomial& tp,
                            const ScatteringAssembly& a,
                            const Tolerances& tol = default_tolerances());

struct Classification {
  RegularityClass cls = RegularityClass::Regular;
  double alpha = 0.0;
  double u = 0.0;             // arccos(alpha)/S0 margin (Regular only)
  double allowed_width = 0.0; // per-frame allowed-zone width
  double forbidden_width = 0.0;
};

Classification classify(const SpectralModel& m,
                        const Tolerances& tol = default_tolerances());

// True when the two models describe the same spectral equation: same S0,
// and identical cosine-form term lists after aligning the leading-phase
// branch (gamma0 differing by an odd integer flips the sign of Phi).
bool models_equivalent(const SpectralModel& a, const SpectralModel& b,
                       double tol_coeff, double* max_dev = nullptr);

} // namespace qgraph
