#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qgraph/scattering.hpp"
#include "qgraph/tolerances.hpp"

namespace qgraph {

struct ResourceCap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A prime periodic orbit as a cyclic word of directed-bond ids, stored in
// canonical rotation (lexicographically minimal).
struct PeriodicOrbit {
  std::vector<int> code;
  int length = 0;
  bool prime = true;
  double action = 0.0; // S_p^0 = sum beta_I L_I along the code
  cplx weight;         // A_p = prod sigma entries * e^{i sum A_I L_I}

  std::string code_string() const;
};

// 0/1 transition structure of T; entries of magnitude <= coeff_drop are
// structural zeros and prune the symbolic dynamics.
std::vector<std::vector<std::uint8_t>> admissibility(
    const ScatteringAssembly& a,
    const Tolerances& tol = default_tolerances());

// All prime orbits with code length <= l_max, canonical, no duplicates.
// Refuses (ResourceCap) when the estimated count exceeds tol.orbit_cap.
std::vector<PeriodicOrbit> enumerate_primes(
    const ScatteringAssembly& a, int l_max,
    const Tolerances& tol = default_tolerances());

// Weight of an arbitrary admissible cyclic code; throws naming the first
// inadmissible transition otherwise.
cplx orbit_weight(const ScatteringAssembly& a, std::span<const int> code,
                  const Tolerances& tol = default_tolerances());
double orbit_action(const ScatteringAssembly& a, std::span<const int> code);

// canonical rotation: lexicographically minimal
std::vector<int> canonical_rotation(std::span<const int> code);
bool is_primitive(std::span<const int> code);

// (1/m) Tr S(k)^m by repeated matrix multiplication.
cplx trace_term(const ScatteringAssembly& a, int m, double k);
// All (1/m) Tr S(k)^m for m = 1..L through the eigenvalues of S(k);
// equal to trace_term to roundoff, much cheaper for large L.
std::vector<cplx> trace_terms_upto(const ScatteringAssembly& a, int L,
                                   double k);

// Same sum assembled from enumerated orbits:
//   Tr S^m = sum_{nu l_p = m} l_p A_p^nu e^{i nu S_p^0 k}
cplx trace_from_orbits(const std::vector<PeriodicOrbit>& primes, int m,
                       double k);

// N~_L(k) = (1/pi) Im sum_{m<=L} (1/m) Tr S(k)^m, the code-length-ordered
// truncation of the staircase fluctuation.
double staircase_fluctuation(const ScatteringAssembly& a, double k, int L);

struct OrbitCensus {
  int l_max = 0;
  std::vector<long long> closed_walks; // index l = 1..l_max, Tr M^l
  std::vector<long long> prime_counts; // aperiodic necklaces per length
  double entropy_estimate = 0.0;       // log-slope of cumulative walk counts
  double log_spectral_radius = 0.0;    // power-iteration benchmark
};

OrbitCensus orbit_census(const ScatteringAssembly& a, int l_max,
                         const Tolerances& tol = default_tolerances());

} // namespace qgraph
