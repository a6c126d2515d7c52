#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

// Named, parameterized graph constructors for the standard model systems:
// scaling steps and deltas in a box, their two-step/two-delta variants, the
// two-vertex circle, the three-bond star, a five-vertex seven-bond network,
// and a multi-step "manhattan" potential.
struct ExampleParam {
  std::string name;
  double value = 0.0; // default
};

struct ExampleInfo {
  std::string name;
  std::string summary;
  std::vector<ExampleParam> params;
  bool is_potential = false; // emitted as a potential spec file
};

const std::vector<ExampleInfo>& example_registry();

struct BuiltExample {
  bool is_potential = false;
  Graph graph;                 // always usable (potentials are compiled)
  PiecewisePotential potential; // meaningful when is_potential
};

BuiltExample make_example(const std::string& name,
                          const std::map<std::string, double>& overrides = {});

// (r2, r3) -> four-vertex chain with those reflection coefficients.
// Default step positions are irrational so the reduced-action combinations
// stay rationally independent for rational grid parameters.
Graph four_vertex_chain(double r2, double r3,
                        double b1 = 0.282842712474619,
                        double b2 = 0.7763932022500211);

} // namespace qgraph
