// Closed-form spectral models of the standard examples, built directly from
// the printed reflection/transmission formulas. Test-only: these are the
// independent reference the extracted models are checked against.
#pragma once

#include <cmath>
#include <numbers>

#include "qgraph/charpoly.hpp"

namespace qgraph::testref {

inline ModelTerm printed_term(double a, double S, double gamma) {
  if (S < 0.0) {
    S = -S;
    gamma = -gamma;
  }
  gamma = std::fmod(gamma, 2.0);
  if (gamma < 0.0) gamma += 2.0;
  if (gamma >= 1.0) {
    gamma -= 1.0;
    a = -a;
  }
  return {a, S, gamma};
}

inline SpectralModel make_printed(double S0, double gamma0,
                                  std::vector<ModelTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const ModelTerm& x, const ModelTerm& y) { return x.S < y.S; });
  SpectralModel m;
  m.S0 = S0;
  m.gamma0 = gamma0;
  m.terms = std::move(terms);
  for (const auto& t : m.terms) m.alpha += std::abs(t.a);
  return m;
}

// step in a box: sin(k S0) = r sin(k (S21 - S23))
inline SpectralModel step_in_box(double b, double lambda) {
  const double beta = std::sqrt(1.0 - lambda);
  const double S21 = b, S23 = beta * (1.0 - b);
  const double r = (1.0 - beta) / (1.0 + beta);
  return make_printed(S21 + S23, 0.5, {printed_term(r, S21 - S23, 0.5)});
}

// delta in a box: cos(k S0 - pi g0) = -|r| cos(k (S21 - S23))
inline SpectralModel delta_in_box(double x0, double l0) {
  const double g0 = 1.0 - std::asin(2.0 / std::sqrt(4.0 + l0 * l0)) /
                              std::numbers::pi;
  const double mod_r = l0 / std::sqrt(4.0 + l0 * l0);
  return make_printed(1.0, g0, {printed_term(-mod_r, 2.0 * x0 - 1.0, 0.0)});
}

// combined step + delta: cos(k S0 - pi g0) = a1 cos(k (S21 - S23) - pi g1)
inline SpectralModel step_delta_in_box(double b, double lambda, double l0) {
  const double b12 = 1.0, b23 = std::sqrt(1.0 - lambda);
  const double S21 = b, S23 = b23 * (1.0 - b);
  const double sum = b12 + b23, dif = b12 - b23;
  const double g0 =
      1.0 - std::asin(sum / std::sqrt(sum * sum + l0 * l0)) / std::numbers::pi;
  const double g1 =
      1.0 - std::asin(dif / std::sqrt(dif * dif + l0 * l0)) / std::numbers::pi;
  const double a1 =
      std::sqrt((dif * dif + l0 * l0) / (sum * sum + l0 * l0));
  return make_printed(S21 + S23, g0, {printed_term(a1, S21 - S23, g1)});
}

// two steps: sin(S0 k) = -r2 sin(k S1) - r2 r3 sin(k S2) + r3 sin(k S3)
inline SpectralModel two_steps_in_box(double r2, double r3, double b1,
                                      double b2) {
  const double b12 = 1.0;
  const double b23 = b12 * (1.0 - r2) / (1.0 + r2);
  const double b34 = b23 * (1.0 - r3) / (1.0 + r3);
  const double S21 = b12 * b1, S23 = b23 * (b2 - b1), S34 = b34 * (1.0 - b2);
  return make_printed(S21 + S23 + S34, 0.5,
                      {printed_term(-r2, S23 + S34 - S21, 0.5),
                       printed_term(-r2 * r3, S21 + S34 - S23, 0.5),
                       printed_term(r3, S21 + S23 - S34, 0.5)});
}

// two deltas: amplitudes a1 = l2/sqrt(4+l2^2) (cut at V2), a2 (cut at V3),
// a3 = a1 a2 (double reflection); phases g1 = asin(a2)/pi, g2 = asin(a1)/pi,
// g3 = 1/2.
inline SpectralModel two_deltas_in_box(double x2, double x3, double l2,
                                       double l3) {
  const double S21 = x2, S23 = x3 - x2, S34 = 1.0 - x3;
  const double q2 = std::sqrt(4.0 + l2 * l2), q3 = std::sqrt(4.0 + l3 * l3);
  const double a1 = l2 / q2, a2 = l3 / q3, a3 = l2 * l3 / (q2 * q3);
  const double g0 = std::asin((l2 * l3 - 4.0) / (q2 * q3)) / std::numbers::pi;
  const double g1 = std::asin(a2) / std::numbers::pi;
  const double g2 = std::asin(a1) / std::numbers::pi;
  return make_printed(1.0, g0,
                      {printed_term(a1, S23 + S34 - S21, g1),
                       printed_term(a2, S21 + S23 - S34, g2),
                       printed_term(a3, S21 + S34 - S23, 0.5)});
}

// circle: cos(k S0) = a1 + a2 cos(k (S12 - S21))
inline SpectralModel circle_step(double b, double lambda) {
  const double b12 = 1.0, b21 = std::sqrt(1.0 - lambda);
  const double S12 = b, S21 = b21 * (1.0 - b);
  const double sum = b12 + b21;
  const double a1 = 4.0 * b12 * b21 / (sum * sum);
  const double a2 = (b12 - b21) * (b12 - b21) / (sum * sum);
  return make_printed(S12 + S21, 0.0,
                      {printed_term(a1, 0.0, 0.0), printed_term(a2, S12 - S21, 0.0)});
}

// star: cos(S0 k) = a1 cos(S1 k) + a2 cos(S2 k) + a3 cos(S3 k)
inline SpectralModel star(double L1, double L2, double L3, double l1,
                          double l2, double l3) {
  const double b1 = std::sqrt(1.0 - l1), b2 = std::sqrt(1.0 - l2),
               b3 = std::sqrt(1.0 - l3);
  const double S14 = b1 * L1, S24 = b2 * L2, S34 = b3 * L3;
  const double denom = b1 + b2 + b3;
  return make_printed(
      S14 + S24 + S34, 0.0,
      {printed_term((b1 - b2 + b3) / denom, S14 - S24 + S34, 0.0),
       printed_term((-b1 + b2 + b3) / denom, S14 - S24 - S34, 0.0),
       printed_term((b1 + b2 - b3) / denom, S14 + S24 - S34, 0.0)});
}

} // namespace qgraph::testref
