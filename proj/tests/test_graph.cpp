#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgraph/graph.hpp"
#include "qgraph/json_io.hpp"
#include "qgraph/registry.hpp"

using namespace qgraph;

namespace {

Graph free_box() {
  return Graph(2, {{0, 1, 1.0, 0.0, 0.0}},
               {VertexCondition::dirichlet(), VertexCondition::dirichlet()});
}

} // namespace

TEST_CASE("free box validates, beta = 1") {
  Graph g = free_box();
  auto rep = g.validate();
  CHECK(rep.valid);
  CHECK(g.bonds()[0].beta() == doctest::Approx(1.0));
}

TEST_CASE("lambda >= 1 is rejected") {
  Graph g(2, {{0, 1, 1.0, 1.2, 0.0}},
          {VertexCondition::dirichlet(), VertexCondition::dirichlet()});
  auto rep = g.validate();
  CHECK_FALSE(rep.valid);
  bool named = false;
  for (const auto& v : rep.violations)
    if (v.find("lambda >= 1") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("self-loops and disconnected graphs are rejected") {
  Graph loop(2, {{0, 0, 1.0, 0.0, 0.0}, {0, 1, 1.0, 0.0, 0.0}},
             {VertexCondition::dirichlet(), VertexCondition::dirichlet()});
  CHECK_FALSE(loop.validate().valid);

  Graph disc(4, {{0, 1, 1.0, 0.0, 0.0}, {2, 3, 1.0, 0.0, 0.0}},
             std::vector<VertexCondition>(4, VertexCondition::dirichlet()));
  CHECK_FALSE(disc.validate().valid);
}

TEST_CASE("step-in-box chain: beta23 = sqrt(0.5)") {
  Graph g = make_example("step-in-box", {{"b", 0.3}, {"lambda", 0.5}}).graph;
  CHECK(g.validate().valid);
  REQUIRE(g.n_bonds() == 2);
  CHECK(g.bonds()[0].L == doctest::Approx(0.3));
  CHECK(g.bonds()[1].L == doctest::Approx(0.7));
  CHECK(g.bonds()[1].beta() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("compile_potential: delta in box, two steps, merged delta") {
  PiecewisePotential p;
  p.segment_lambdas = {0.0};
  p.delta_spikes = {{0.5, 1.0}};
  Graph g = compile_potential(p);
  CHECK(g.n_vertices() == 3);
  CHECK(g.n_bonds() == 2);
  CHECK(g.bonds()[0].lambda == 0.0);
  CHECK(g.bonds()[1].lambda == 0.0);
  CHECK(g.condition(1).lambda0 == doctest::Approx(1.0));
  CHECK(g.condition(0).is_dirichlet());

  PiecewisePotential two;
  two.breakpoints = {0.3, 0.75};
  two.segment_lambdas = {0.0, 0.4, 0.6};
  Graph g2 = compile_potential(two);
  CHECK(g2.n_vertices() == 4);
  CHECK(g2.bonds()[1].lambda == doctest::Approx(0.4));

  // breakpoint and delta at the same coordinate become one vertex
  PiecewisePotential merged;
  merged.breakpoints = {0.3};
  merged.segment_lambdas = {0.0, 0.5};
  merged.delta_spikes = {{0.3, 2.0}};
  Graph g3 = compile_potential(merged);
  CHECK(g3.n_vertices() == 3);
  CHECK(g3.condition(1).lambda0 == doctest::Approx(2.0));
}

TEST_CASE("compile_potential output always validates") {
  for (double b : {0.1, 0.25, 0.5, 0.9}) {
    PiecewisePotential p;
    p.breakpoints = {b};
    p.segment_lambdas = {0.2, -0.7};
    p.delta_spikes = {{b / 2, 1.3}};
    CHECK(compile_potential(p).validate().valid);
  }
}

TEST_CASE("directed bonds: ordering, pairing, reversal") {
  Graph g = make_example("step-in-box").graph;
  auto db = g.directed_bonds();
  REQUIRE(db.size() == 4); // 2 N_B
  CHECK(db[0].from == 0);
  CHECK(db[0].to == 1);
  CHECK(db[1].from == 1);
  CHECK(db[1].to == 0);
  CHECK(db[2].from == 1);
  CHECK(db[3].from == 2);
  for (const auto& d : db) {
    const auto& r = db[d.reverse];
    CHECK(r.reverse == (&d - db.data()));
    CHECK(d.beta == r.beta);
    CHECK(d.L == r.L);
    CHECK(d.A == -r.A);
  }

  // seven-bond network: 14 directed bonds
  CHECK(make_example("five-vertex-network").graph.directed_bonds().size() == 14);

  // parallel bonds of the circle stay distinct
  auto circle = make_example("circle-step").graph;
  auto cdb = circle.directed_bonds();
  REQUIRE(cdb.size() == 4);
  CHECK(cdb[0].undirected == 0);
  CHECK(cdb[2].undirected == 1);
}

TEST_CASE("directed ordering is a pure function of the graph value") {
  // same bond set inserted in different orders and orientations
  Graph g1(3, {{0, 1, 0.3, 0.0, 0.1}, {1, 2, 0.7, 0.5, -0.2}},
           {VertexCondition::dirichlet(), VertexCondition::scaling(0.0),
            VertexCondition::dirichlet()});
  Graph g2(3, {{2, 1, 0.7, 0.5, 0.2}, {1, 0, 0.3, 0.0, -0.1}},
           {VertexCondition::dirichlet(), VertexCondition::scaling(0.0),
            VertexCondition::dirichlet()});
  auto d1 = g1.directed_bonds();
  auto d2 = g2.directed_bonds();
  REQUIRE(d1.size() == d2.size());
  for (size_t i = 0; i < d1.size(); ++i) {
    CHECK(d1[i].from == d2[i].from);
    CHECK(d1[i].to == d2[i].to);
    CHECK(d1[i].A == doctest::Approx(d2[i].A));
  }
}

TEST_CASE("graph and potential JSON round-trips") {
  for (const auto& info : example_registry()) {
    BuiltExample ex = make_example(info.name);
    if (ex.is_potential) {
      PiecewisePotential back = potential_from_json(potential_to_json(ex.potential));
      CHECK(back.box_length == ex.potential.box_length);
      CHECK(back.breakpoints == ex.potential.breakpoints);
      CHECK(back.segment_lambdas == ex.potential.segment_lambdas);
      Graph gb = compile_potential(back);
      CHECK(gb.n_bonds() == ex.graph.n_bonds());
    }
    Graph g2 = graph_from_json(graph_to_json(ex.graph));
    REQUIRE(g2.n_bonds() == ex.graph.n_bonds());
    CHECK(g2.n_vertices() == ex.graph.n_vertices());
    for (int b = 0; b < g2.n_bonds(); ++b) {
      CHECK(g2.bonds()[b].i == ex.graph.bonds()[b].i);
      CHECK(g2.bonds()[b].j == ex.graph.bonds()[b].j);
      CHECK(g2.bonds()[b].L == ex.graph.bonds()[b].L);
      CHECK(g2.bonds()[b].lambda == ex.graph.bonds()[b].lambda);
      CHECK(g2.bonds()[b].A == ex.graph.bonds()[b].A);
    }
  }
}

TEST_CASE("negative delta strength is rejected") {
  PiecewisePotential p;
  p.segment_lambdas = {0.0};
  p.delta_spikes = {{0.5, -1.0}};
  CHECK_FALSE(p.validate().valid);
  Graph g(2, {{0, 1, 1.0, 0.0, 0.0}},
          {VertexCondition::scaling(-0.5), VertexCondition::dirichlet()});
  CHECK_FALSE(g.validate().valid);
}
