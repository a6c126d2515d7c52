#include "qgraph/registry.hpp"

#include <cmath>

namespace qgraph {

namespace {

double param(const std::map<std::string, double>& overrides,
             const ExampleInfo& info, const std::string& name) {
  auto it = overrides.find(name);
  if (it != overrides.end()) return it->second;
  for (const auto& p : info.params)
    if (p.name == name) return p.value;
  throw InvalidInput("example " + info.name + ": unknown parameter " + name);
}

const ExampleInfo& info_for(const std::string& name) {
  for (const auto& e : example_registry())
    if (e.name == name) return e;
  throw InvalidInput("unknown example: " + name);
}

} // namespace

const std::vector<ExampleInfo>& example_registry() {
  static const std::vector<ExampleInfo> reg = {
      {"step-in-box",
       "scaling step at x=b inside a Dirichlet box",
       {{"b", 0.3}, {"lambda", 0.5}},
       false},
      {"delta-in-box",
       "scaling delta of strength lambda0 at x=x0 inside a Dirichlet box",
       {{"x0", 0.5}, {"lambda0", 1.0}},
       false},
      {"step-delta-in-box",
       "scaling step at x=b carrying a scaling delta of strength lambda0",
       {{"b", 0.3}, {"lambda", 0.5}, {"lambda0", 1.0}},
       false},
      {"two-steps-in-box",
       "four-vertex chain parameterized by reflection coefficients r2, r3",
       {{"r2", 0.2},
        {"r3", 0.3},
        {"b1", 0.282842712474619},
        {"b2", 0.7763932022500211}},
       false},
      {"two-deltas-in-box",
       "scaling deltas lambda20, lambda30 at x2, x3 inside a Dirichlet box",
       {{"x2", 0.3}, {"x3", 0.75}, {"lambda20", 0.7}, {"lambda30", 0.7}},
       false},
      {"circle-step",
       "two-vertex circle: free arc of length b plus a scaling-step arc",
       {{"b", 0.3}, {"lambda", 0.5}},
       false},
      {"star",
       "three dressed bonds joined at a free center, Dirichlet dead ends",
       {{"L1", 0.35},
        {"L2", 0.45},
        {"L3", 0.55},
        {"lambda1", 0.2},
        {"lambda2", 0.4},
        {"lambda3", 0.6}},
       false},
      {"five-vertex-network",
       "five vertices, seven free bonds of unequal lengths",
       {},
       false},
      {"manhattan-potential",
       "piecewise-constant multi-step potential in a Dirichlet box",
       {},
       true},
  };
  return reg;
}

Graph four_vertex_chain(double r2, double r3, double b1, double b2) {
  if (std::abs(r2) >= 1.0 || std::abs(r3) >= 1.0)
    throw InvalidInput("reflection coefficients must lie in (-1, 1)");
  const double beta12 = 1.0;
  const double beta23 = beta12 * (1.0 - r2) / (1.0 + r2);
  const double beta34 = beta23 * (1.0 - r3) / (1.0 + r3);
  std::vector<Bond> bonds = {
      {0, 1, b1, 1.0 - beta12 * beta12, 0.0},
      {1, 2, b2 - b1, 1.0 - beta23 * beta23, 0.0},
      {2, 3, 1.0 - b2, 1.0 - beta34 * beta34, 0.0},
  };
  std::vector<VertexCondition> conds = {
      VertexCondition::dirichlet(), VertexCondition::scaling(0.0),
      VertexCondition::scaling(0.0), VertexCondition::dirichlet()};
  return Graph(4, std::move(bonds), std::move(conds));
}

BuiltExample make_example(const std::string& name,
                          const std::map<std::string, double>& overrides) {
  const ExampleInfo& info = info_for(name);
  for (const auto& [k, v] : overrides) {
    (void)v;
    bool known = false;
    for (const auto& p : info.params) known |= (p.name == k);
    if (!known)
      throw InvalidInput("example " + name + ": unknown parameter " + k);
  }
  auto p = [&](const std::string& n) { return param(overrides, info, n); };

  BuiltExample out;
  if (name == "step-in-box") {
    PiecewisePotential pot;
    pot.box_length = 1.0;
    pot.breakpoints = {p("b")};
    pot.segment_lambdas = {0.0, p("lambda")};
    out.graph = compile_potential(pot);
  } else if (name == "delta-in-box") {
    PiecewisePotential pot;
    pot.box_length = 1.0;
    pot.segment_lambdas = {0.0};
    pot.delta_spikes = {{p("x0"), p("lambda0")}};
    out.graph = compile_potential(pot);
  } else if (name == "step-delta-in-box") {
    PiecewisePotential pot;
    pot.box_length = 1.0;
    pot.breakpoints = {p("b")};
    pot.segment_lambdas = {0.0, p("lambda")};
    pot.delta_spikes = {{p("b"), p("lambda0")}};
    out.graph = compile_potential(pot);
  } else if (name == "two-steps-in-box") {
    out.graph = four_vertex_chain(p("r2"), p("r3"), p("b1"), p("b2"));
  } else if (name == "two-deltas-in-box") {
    PiecewisePotential pot;
    pot.box_length = 1.0;
    pot.segment_lambdas = {0.0};
    pot.delta_spikes = {{p("x2"), p("lambda20")}, {p("x3"), p("lambda30")}};
    out.graph = compile_potential(pot);
  } else if (name == "circle-step") {
    std::vector<Bond> bonds = {
        {0, 1, p("b"), 0.0, 0.0},
        {0, 1, 1.0 - p("b"), p("lambda"), 0.0},
    };
    std::vector<VertexCondition> conds = {VertexCondition::scaling(0.0),
                                          VertexCondition::scaling(0.0)};
    out.graph = Graph(2, std::move(bonds), std::move(conds));
  } else if (name == "star") {
    std::vector<Bond> bonds = {
        {0, 3, p("L1"), p("lambda1"), 0.0},
        {1, 3, p("L2"), p("lambda2"), 0.0},
        {2, 3, p("L3"), p("lambda3"), 0.0},
    };
    std::vector<VertexCondition> conds = {
        VertexCondition::dirichlet(), VertexCondition::dirichlet(),
        VertexCondition::dirichlet(), VertexCondition::scaling(0.0)};
    out.graph = Graph(4, std::move(bonds), std::move(conds));
  } else if (name == "five-vertex-network") {
    std::vector<Bond> bonds = {
        {0, 1, 0.41, 0.0, 0.0}, {0, 2, 0.57, 0.0, 0.0},
        {1, 2, 0.63, 0.0, 0.0}, {1, 3, 0.29, 0.0, 0.0},
        {2, 3, 0.77, 0.0, 0.0}, {2, 4, 0.36, 0.0, 0.0},
        {3, 4, 0.52, 0.0, 0.0},
    };
    std::vector<VertexCondition> conds(5, VertexCondition::scaling(0.0));
    out.graph = Graph(5, std::move(bonds), std::move(conds));
  } else if (name == "manhattan-potential") {
    out.is_potential = true;
    out.potential.box_length = 1.0;
    out.potential.breakpoints = {0.15, 0.3, 0.45, 0.6, 0.8};
    out.potential.segment_lambdas = {0.1, 0.55, 0.25, 0.7, 0.0, 0.4};
    out.graph = compile_potential(out.potential);
  }
  return out;
}

} // namespace qgraph
