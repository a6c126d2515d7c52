#pragma once

#include <functional>

namespace qgraph {

// Adaptive Gauss-Legendre integration, degree-20 panels split until the
// whole-vs-halves discrepancy drops below abstol. Integrands here are
// smooth and band-limited, so the recursion depth stays small.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abstol, int max_depth = 28);

} // namespace qgraph
