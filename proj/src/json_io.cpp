#include "qgraph/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qgraph {

using nlohmann::json;

namespace {

json condition_to_json(const VertexCondition& c) {
  if (c.is_dirichlet()) return json{{"type", "dirichlet"}};
  return json{{"type", "scaling"}, {"lambda0", c.lambda0}};
}

VertexCondition condition_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "dirichlet") return VertexCondition::dirichlet();
  if (type == "scaling")
    return VertexCondition::scaling(j.at("lambda0").get<double>());
  throw InvalidInput("unknown vertex condition type: " + type);
}

} // namespace

std::string graph_to_json(const Graph& g) {
  json bonds = json::array();
  for (const auto& b : g.bonds())
    bonds.push_back({{"i", b.i},
                     {"j", b.j},
                     {"L", b.L},
                     {"lambda", b.lambda},
                     {"A", b.A}});
  json conds = json::array();
  for (const auto& c : g.vertex_conditions()) conds.push_back(condition_to_json(c));
  json out{{"vertices", g.n_vertices()},
           {"bonds", bonds},
           {"vertex_conditions", conds}};
  return out.dump(2) + "\n";
}

Graph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("JSON parse error: ") + e.what());
  }
  try {
    int n = j.at("vertices").get<int>();
    std::vector<Bond> bonds;
    for (const auto& bj : j.at("bonds")) {
      Bond b;
      b.i = bj.at("i").get<int>();
      b.j = bj.at("j").get<int>();
      b.L = bj.at("L").get<double>();
      b.lambda = bj.value("lambda", 0.0);
      b.A = bj.value("A", 0.0);
      bonds.push_back(b);
    }
    std::vector<VertexCondition> conds;
    for (const auto& cj : j.at("vertex_conditions"))
      conds.push_back(condition_from_json(cj));
    return Graph(n, std::move(bonds), std::move(conds));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("graph file: ") + e.what());
  }
}

std::string potential_to_json(const PiecewisePotential& p) {
  json deltas = json::array();
  for (const auto& d : p.delta_spikes)
    deltas.push_back({{"x", d.x}, {"lambda0", d.lambda0}});
  json out{{"box_length", p.box_length},
           {"breakpoints", p.breakpoints},
           {"segment_lambdas", p.segment_lambdas},
           {"delta_spikes", deltas},
           {"end_conditions",
            json::array(
                {condition_to_json(p.left), condition_to_json(p.right)})}};
  return out.dump(2) + "\n";
}

PiecewisePotential potential_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("JSON parse error: ") + e.what());
  }
  try {
    PiecewisePotential p;
    p.box_length = j.at("box_length").get<double>();
    p.breakpoints = j.value("breakpoints", std::vector<double>{});
    p.segment_lambdas = j.at("segment_lambdas").get<std::vector<double>>();
    for (const auto& dj : j.value("delta_spikes", json::array()))
      p.delta_spikes.push_back(
          {dj.at("x").get<double>(), dj.at("lambda0").get<double>()});
    const auto& ends = j.at("end_conditions");
    p.left = condition_from_json(ends.at(0));
    p.right = condition_from_json(ends.at(1));
    return p;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("potential file: ") + e.what());
  }
}

Graph load_graph_file(const std::string& path) {
  const std::string text = read_file(path);
  json probe;
  try {
    probe = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  if (probe.contains("box_length"))
    return compile_potential(potential_from_json(text));
  return graph_from_json(text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << content;
}

} // namespace qgraph
