#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/tolerances.hpp"

namespace qgraph {

using cplx = std::complex<double>;

// k-independent scattering matrix of one vertex, indexed by incident bond
// slot (rows: outgoing bond, cols: incoming bond). Indexing by slot rather
// than by far vertex keeps parallel bonds unambiguous.
struct VertexSigma {
  int vertex = 0;
  std::vector<int> slots; // incident undirected bond indices, ascending
  std::vector<int> far;   // far vertex per slot
  double v_sum = 0.0;     // sum of incident betas
  Eigen::MatrixXcd sigma;

  int slot_of(int undirected_bond) const;
};

VertexSigma vertex_sigma(const Graph& g, int vertex);

// Constant part of the bond scattering problem: T, the directed-bond
// transition matrix, plus the global phase data S0 and gamma0.
struct ScatteringAssembly {
  Graph graph;
  std::vector<DirectedBond> dbonds; // size 2*N_B
  std::vector<VertexSigma> sigmas;  // per vertex
  Eigen::MatrixXcd T;               // 2N_B x 2N_B, unitary
  double S0 = 0.0;                  // total reduced action
  double gamma0 = 0.0;              // absolute value from the vertex data
  std::vector<double> v;            // per-vertex sum of betas

  int dim() const { return static_cast<int>(dbonds.size()); }

  Eigen::VectorXcd phases(double k) const; // diag of D(k)
  Eigen::MatrixXcd S_of_k(double k) const; // D(k) * T
  cplx delta_direct(double k) const;       // det[1 - S(k)]
};

ScatteringAssembly assemble(const Graph& g);

// max |S(k)†S(k) - 1| entry
double unitarity_residual(const ScatteringAssembly& a, double k);

} // namespace qgraph
