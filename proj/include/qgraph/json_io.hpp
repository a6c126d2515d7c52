#pragma once

#include <string>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph spec files:
//   {"vertices": N,
//    "bonds": [{"i":0,"j":1,"L":0.3,"lambda":0.0,"A":0.0}, ...],
//    "vertex_conditions": [{"type":"scaling","lambda0":0.0},
//                          {"type":"dirichlet"}, ...]}
// Potential spec files mirror PiecewisePotential:
//   {"box_length":1.0, "breakpoints":[...], "segment_lambdas":[...],
//    "delta_spikes":[{"x":0.5,"lambda0":1.0}],
//    "end_conditions":[{...},{...}]}
// Vertex ids are 0-based. A file containing "box_length" is treated as a
// potential and compiled on load.

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

std::string potential_to_json(const PiecewisePotential& p);
PiecewisePotential potential_from_json(const std::string& text);

// Loads either format; potentials are compiled to their chain graph.
Graph load_graph_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace qgraph
