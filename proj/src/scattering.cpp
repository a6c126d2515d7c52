#include "qgraph/scattering.hpp"

#include <cmath>
#include <numbers>

namespace qgraph {

int VertexSigma::slot_of(int undirected_bond) const {
  for (size_t s = 0; s < slots.size(); ++s)
    if (slots[s] == undirected_bond) return static_cast<int>(s);
  throw InvalidInput("bond not incident to vertex " + std::to_string(vertex));
}

VertexSigma vertex_sigma(const Graph& g, int vertex) {
  VertexSigma vs;
  vs.vertex = vertex;
  vs.slots = g.incident_bonds(vertex);
  const int d = static_cast<int>(vs.slots.size());
  if (d == 0) throw InvalidInput("isolated vertex " + std::to_string(vertex));

  std::vector<double> beta(d);
  for (int s = 0; s < d; ++s) {
    const Bond& b = g.bonds()[vs.slots[s]];
    vs.far.push_back(b.i == vertex ? b.j : b.i);
    beta[s] = b.beta();
    vs.v_sum += beta[s];
  }

  vs.sigma = Eigen::MatrixXcd::Zero(d, d);
  const VertexCondition& c = g.condition(vertex);
  if (c.is_dirichlet()) {
    // hard wall: sigma = -1, the lambda0 -> inf limit taken exactly
    vs.sigma = -Eigen::MatrixXcd::Identity(d, d);
  } else {
    const cplx denom(vs.v_sum, c.lambda0);
    for (int r = 0; r < d; ++r)
      for (int col = 0; col < d; ++col) {
        cplx val = 2.0 * std::sqrt(beta[r] * beta[col]) / denom;
        if (r == col) val -= 1.0;
        vs.sigma(r, col) = val;
      }
  }
  return vs;
}

ScatteringAssembly assemble(const Graph& g) {
  auto rep = g.validate();
  if (!rep.valid) throw InvalidInput("invalid graph: " + rep.violations.front());

  ScatteringAssembly a;
  a.graph = g;
  a.dbonds = g.directed_bonds();
  const int dim = static_cast<int>(a.dbonds.size());

  a.sigmas.reserve(g.n_vertices());
  a.v.resize(g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v) {
    a.sigmas.push_back(vertex_sigma(g, v));
    a.v[v] = a.sigmas.back().v_sum;
  }

  // T couples incoming directed bond I (head at vertex w) to outgoing J
  // (tail at w) through sigma of w.
  a.T = Eigen::MatrixXcd::Zero(dim, dim);
  for (int I = 0; I < dim; ++I) {
    const int w = a.dbonds[I].to;
    const VertexSigma& vs = a.sigmas[w];
    const int slot_in = vs.slot_of(a.dbonds[I].undirected);
    for (int J = 0; J < dim; ++J) {
      if (a.dbonds[J].from != w) continue;
      const int slot_out = vs.slot_of(a.dbonds[J].undirected);
      a.T(J, I) = vs.sigma(slot_out, slot_in);
    }
  }

  for (const auto& b : g.bonds()) a.S0 += b.beta() * b.L;

  a.gamma0 = 0.5 * (g.n_bonds() + g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v) {
    const auto& c = g.condition(v);
    if (c.is_dirichlet())
      a.gamma0 += 0.5; // arctan(inf)/pi
    else
      a.gamma0 += std::atan(c.lambda0 / a.v[v]) / std::numbers::pi;
  }
  return a;
}

Eigen::VectorXcd ScatteringAssembly::phases(double k) const {
  Eigen::VectorXcd d(dim());
  for (int I = 0; I < dim(); ++I) {
    const auto& b = dbonds[I];
    d(I) = std::exp(cplx(0.0, (b.beta * k + b.A) * b.L));
  }
  return d;
}

Eigen::MatrixXcd ScatteringAssembly::S_of_k(double k) const {
  return phases(k).asDiagonal() * T;
}

cplx ScatteringAssembly::delta_direct(double k) const {
  Eigen::MatrixXcd M =
      Eigen::MatrixXcd::Identity(dim(), dim()) - S_of_k(k);
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
}

double unitarity_residual(const ScatteringAssembly& a, double k) {
  Eigen::MatrixXcd S = a.S_of_k(k);
  Eigen::MatrixXcd R =
      S.adjoint() * S - Eigen::MatrixXcd::Identity(a.dim(), a.dim());
  return R.cwiseAbs().maxCoeff();
}

} // namespace qgraph
