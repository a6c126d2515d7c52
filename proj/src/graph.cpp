#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgraph {

Graph::Graph(int n_vertices, std::vector<Bond> bonds,
             std::vector<VertexCondition> conditions)
    : n_vertices_(n_vertices),
      bonds_(std::move(bonds)),
      conditions_(std::move(conditions)) {
  for (auto& b : bonds_) {
    if (b.i > b.j) {
      std::swap(b.i, b.j);
      b.A = -b.A;
    }
  }
  std::stable_sort(bonds_.begin(), bonds_.end(),
                   [](const Bond& a, const Bond& b) {
                     return a.i != b.i ? a.i < b.i : a.j < b.j;
                   });
}

bool Graph::connected(int i, int j) const {
  for (const auto& b : bonds_)
    if ((b.i == i && b.j == j) || (b.i == j && b.j == i)) return true;
  return false;
}

std::vector<int> Graph::incident_bonds(int v) const {
  std::vector<int> out;
  for (int b = 0; b < n_bonds(); ++b)
    if (bonds_[b].i == v || bonds_[b].j == v) out.push_back(b);
  return out;
}

ValidationReport Graph::validate() const {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };

  if (n_vertices_ < 1) fail("graph has no vertices");
  if (bonds_.empty()) fail("graph has no bonds");
  if (static_cast<int>(conditions_.size()) != n_vertices_)
    fail("vertex_conditions size " + std::to_string(conditions_.size()) +
         " != vertices " + std::to_string(n_vertices_));

  for (int b = 0; b < n_bonds(); ++b) {
    const Bond& bd = bonds_[b];
    const std::string tag = "bond " + std::to_string(b) + ": ";
    if (bd.i < 0 || bd.i >= n_vertices_ || bd.j < 0 || bd.j >= n_vertices_)
      fail(tag + "vertex id out of range");
    if (bd.i == bd.j) fail(tag + "self-loop (i == j) forbidden");
    if (!(bd.L > 0.0)) fail(tag + "L <= 0");
    if (!(bd.lambda < 1.0)) fail(tag + "lambda >= 1");
    if (!std::isfinite(bd.lambda) || !std::isfinite(bd.L) ||
        !std::isfinite(bd.A))
      fail(tag + "non-finite parameter");
  }

  for (int v = 0; v < static_cast<int>(conditions_.size()); ++v) {
    const auto& c = conditions_[v];
    if (c.kind == VertexCondition::Kind::Scaling &&
        (!std::isfinite(c.lambda0) || c.lambda0 < 0.0))
      fail("vertex " + std::to_string(v) + ": lambda0 must be finite and >= 0");
  }

  if (rep.valid && n_vertices_ > 0) {
    // connectivity + valency via BFS over undirected bonds
    std::vector<int> valency(n_vertices_, 0);
    std::vector<std::vector<int>> adj(n_vertices_);
    for (const auto& b : bonds_) {
      ++valency[b.i];
      ++valency[b.j];
      adj[b.i].push_back(b.j);
      adj[b.j].push_back(b.i);
    }
    for (int v = 0; v < n_vertices_; ++v)
      if (valency[v] == 0) fail("vertex " + std::to_string(v) + ": valency 0");
    std::vector<char> seen(n_vertices_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    if (std::count(seen.begin(), seen.end(), 1) != n_vertices_)
      fail("graph is not connected");
  }
  return rep;
}

std::vector<DirectedBond> Graph::directed_bonds() const {
  std::vector<DirectedBond> out;
  out.reserve(2 * bonds_.size());
  for (int b = 0; b < n_bonds(); ++b) {
    const Bond& bd = bonds_[b];
    DirectedBond fwd{bd.i, bd.j, bd.L, bd.beta(), bd.A, b, 2 * b + 1};
    DirectedBond rev{bd.j, bd.i, bd.L, bd.beta(), -bd.A, b, 2 * b};
    out.push_back(fwd);
    out.push_back(rev);
  }
  return out;
}

ValidationReport PiecewisePotential::validate() const {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  if (!(box_length > 0.0)) fail("box_length <= 0");
  for (size_t k = 0; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > 0.0 && breakpoints[k] < box_length))
      fail("breakpoint " + std::to_string(k) + " outside (0, box_length)");
    if (k > 0 && !(breakpoints[k] > breakpoints[k - 1]))
      fail("breakpoints not strictly ascending at index " + std::to_string(k));
  }
  if (segment_lambdas.size() != breakpoints.size() + 1)
    fail("segment_lambdas must have breakpoints+1 entries");
  for (size_t k = 0; k < segment_lambdas.size(); ++k)
    if (!(segment_lambdas[k] < 1.0))
      fail("segment " + std::to_string(k) + ": lambda >= 1");
  for (size_t k = 0; k < delta_spikes.size(); ++k) {
    if (!(delta_spikes[k].x > 0.0 && delta_spikes[k].x < box_length))
      fail("delta " + std::to_string(k) + " outside (0, box_length)");
    if (delta_spikes[k].lambda0 < 0.0)
      fail("delta " + std::to_string(k) + ": strength < 0");
  }
  return rep;
}

Graph compile_potential(const PiecewisePotential& p) {
  auto rep = p.validate();
  if (!rep.valid)
    throw InvalidInput("invalid potential: " + rep.violations.front());

  struct Cut {
    double x;
    bool has_delta;
    double lambda0;
  };
  std::vector<Cut> cuts;
  for (double b : p.breakpoints) cuts.push_back({b, false, 0.0});
  for (const auto& d : p.delta_spikes) {
    bool merged = false;
    for (auto& c : cuts)
      if (c.x == d.x) { // same literal coordinate: one vertex carries the delta
        c.has_delta = true;
        c.lambda0 += d.lambda0;
        merged = true;
        break;
      }
    if (!merged) cuts.push_back({d.x, true, d.lambda0});
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const Cut& a, const Cut& b) { return a.x < b.x; });

  const int n_vertices = static_cast<int>(cuts.size()) + 2;
  std::vector<VertexCondition> conds(n_vertices);
  conds.front() = p.left;
  conds.back() = p.right;
  for (size_t k = 0; k < cuts.size(); ++k)
    conds[k + 1] = VertexCondition::scaling(cuts[k].lambda0);

  auto lambda_at = [&p](double x) {
    size_t seg = 0;
    while (seg < p.breakpoints.size() && x > p.breakpoints[seg]) ++seg;
    return p.segment_lambdas[seg];
  };

  std::vector<Bond> bonds;
  double x_prev = 0.0;
  for (int v = 1; v < n_vertices; ++v) {
    double x_next = (v == n_vertices - 1) ? p.box_length : cuts[v - 1].x;
    double mid = 0.5 * (x_prev + x_next);
    bonds.push_back({v - 1, v, x_next - x_prev, lambda_at(mid), 0.0});
    x_prev = x_next;
  }
  return Graph(n_vertices, std::move(bonds), std::move(conds));
}

} // namespace qgraph
