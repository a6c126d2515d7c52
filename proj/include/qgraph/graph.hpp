#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VertexCondition {
  enum class Kind { Scaling, Dirichlet };
  Kind kind = Kind::Scaling;
  double lambda0 = 0.0; // meaningful for Scaling only

  static VertexCondition scaling(double l0) { return {Kind::Scaling, l0}; }
  static VertexCondition dirichlet() { return {Kind::Dirichlet, 0.0}; }
  bool is_dirichlet() const { return kind == Kind::Dirichlet; }
};

// One undirected bond, stored with i < j; A follows the i->j sense.
struct Bond {
  int i = 0;
  int j = 0;
  double L = 0.0;      // length
  double lambda = 0.0; // scaling potential strength, must stay < 1
  double A = 0.0;      // magnetic constant along i->j

  double beta() const { return std::sqrt(1.0 - lambda); }
};

// Directed view of a bond. Reversal negates A, keeps L and beta.
struct DirectedBond {
  int from = 0;
  int to = 0;
  double L = 0.0;
  double beta = 0.0;
  double A = 0.0;
  int undirected = 0; // index into Graph::bonds()
  int reverse = 0;    // index of the opposite direction
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
};

class Graph {
 public:
  Graph() = default;
  // Bonds may arrive in any orientation; they are normalized to i < j
  // (negating A) and stably sorted by (i, j), preserving insertion order
  // among parallel bonds.
  Graph(int n_vertices, std::vector<Bond> bonds,
        std::vector<VertexCondition> conditions);

  int n_vertices() const { return n_vertices_; }
  int n_bonds() const { return static_cast<int>(bonds_.size()); }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<VertexCondition>& vertex_conditions() const {
    return conditions_;
  }
  const VertexCondition& condition(int v) const { return conditions_.at(v); }

  bool connected(int i, int j) const;
  // Undirected bond indices incident to v, ascending. Parallel bonds appear
  // as distinct slots; this is the row/column order of the vertex sigma.
  std::vector<int> incident_bonds(int v) const;

  ValidationReport validate() const;

  // Deterministic directed-bond list: bond b yields indices 2b (i->j) and
  // 2b+1 (j->i).
  std::vector<DirectedBond> directed_bonds() const;

 private:
  int n_vertices_ = 0;
  std::vector<Bond> bonds_;
  std::vector<VertexCondition> conditions_;
};

// 1-D piecewise scaling potential in a box, compiled to a chain graph.
struct PiecewisePotential {
  double box_length = 1.0;
  std::vector<double> breakpoints;     // ascending, inside (0, box_length)
  std::vector<double> segment_lambdas; // breakpoints.size() + 1 entries
  struct Delta {
    double x = 0.0;
    double lambda0 = 0.0;
  };
  std::vector<Delta> delta_spikes;
  VertexCondition left = VertexCondition::dirichlet();
  VertexCondition right = VertexCondition::dirichlet();

  ValidationReport validate() const;
};

Graph compile_potential(const PiecewisePotential& p);

} // namespace qgraph
