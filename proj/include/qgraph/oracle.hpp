#pragma once

#include <vector>

#include "qgraph/charpoly.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/scattering.hpp"
#include "qgraph/tolerances.hpp"

namespace qgraph {

enum class ScanMethod { FrameBisection, DenseScan };

struct RootScan {
  double k_max = 0.0;
  ScanMethod method = ScanMethod::DenseScan;
  std::vector<double> roots;        // ascending
  std::vector<double> residuals;    // |F| (or |Delta|) at each root
  std::vector<int> multiplicity;    // 2 marks a flagged near-tangency
  std::vector<bool> degenerate;     // root within tolerance of a separator
  std::vector<int> frame;           // frame index (FrameBisection only)
  bool heuristic = false;           // dense scan on an Irregular graph
};

// Ground-truth roots of cos(S0 k - pi gamma0) = Phi(k) on (0, k_max].
// FrameBisection requires mu and a Regular/Marginal class; DenseScan works
// for any class.
RootScan find_roots(const SpectralModel& m, double k_max, ScanMethod method,
                    const Tolerances& tol = default_tolerances());

// Independent route: scan |det[1 - S(k)]| for near-zero minima.
RootScan find_roots_detscan(const ScatteringAssembly& a, double k_max,
                            double alpha_hint = 1.0,
                            const Tolerances& tol = default_tolerances());

// N(k): number of roots <= k, counting multiplicity.
int staircase_count(const RootScan& scan, double k);

// Nbar(k) = (S0/pi) k - (mu + gamma0 + 1); requires mu.
double average_staircase(const SpectralModel& m, double k);

struct ConvergenceRow {
  int n = 0;
  int L = 0;
  double k_explicit = 0.0;
  double k_oracle = 0.0;
  double eps = 0.0; // |k_explicit - k_oracle| / k_oracle
};

// Relative-error table of the explicit (trace-resummed) eigenvalues
// against oracle roots; Regular graphs only.
std::vector<ConvergenceRow> convergence_study(
    const Graph& g, const std::vector<int>& n_list,
    const std::vector<int>& L_list,
    const Tolerances& tol = default_tolerances());

} // namespace qgraph
