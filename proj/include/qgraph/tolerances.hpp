#pragma once

#include <string>

namespace qgraph {

// Central tolerance / resource-cap record. Every numerical threshold used by
// the library lives here so a single --tol-file can override them all.
struct Tolerances {
  double unitarity = 1e-12;          // max |S†S - 1| entry
  double theta_linearity = 1e-9;     // unwrapped det-phase vs S0*k
  double gamma_phase = 1e-9;         // gamma0 (mod 1) vs determinant phase
  double coeff_drop = 1e-14;         // expansion coefficients below this are dropped
  double freq_merge_rel = 1e-9;      // frequency cluster width, relative to S0
  double reality = 1e-10;            // max |Im R(k)| after phase removal
  double class_margin = 1e-9;        // |alpha - 1| band for Marginal
  double model_term_drop = 1e-13;    // cosine amplitudes below this are dropped
  double root_residual = 1e-12;      // |F(root)|, scale-relative
  double root_separation_rel = 1e-9; // min root spacing, relative to pi/S0
  double quad_abstol = 1e-10;        // adaptive Gauss-Legendre target
  double implicit_tol = 1e-12;       // fixed-point |dk| stop
  int implicit_max_iter = 10000;
  int subset_cap = 24;               // max 2*N_B for determinant expansion
  double orbit_cap = 1e7;            // max estimated prime-orbit count
  int prime_sum_cap = 24;            // max code length for literal prime sums
  double separator_degenerate = 1e-9; // root-at-separator detection
  int scan_steps = 8;                // dense scan step = pi/(scan_steps*S0*(1+alpha))
  double double_root = 1e-10;        // |F| threshold for multiplicity-2 minima
  double mu_intercept = 0.1;         // staircase-intercept cross-check window
};

const Tolerances& default_tolerances();

// Parses a JSON object of overrides; unknown keys are an error.
Tolerances tolerances_from_file(const std::string& path);

} // namespace qgraph
