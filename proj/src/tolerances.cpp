#include "qgraph/tolerances.hpp"

#include <stdexcept>

#include <json.hpp>

#include "qgraph/json_io.hpp"

namespace qgraph {

const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

Tolerances tolerances_from_file(const std::string& path) {
  using nlohmann::json;
  Tolerances t;
  json j = json::parse(read_file(path));
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "unitarity") t.unitarity = it.value().get<double>();
    else if (k == "theta_linearity") t.theta_linearity = it.value().get<double>();
    else if (k == "gamma_phase") t.gamma_phase = it.value().get<double>();
    else if (k == "coeff_drop") t.coeff_drop = it.value().get<double>();
    else if (k == "freq_merge_rel") t.freq_merge_rel = it.value().get<double>();
    else if (k == "reality") t.reality = it.value().get<double>();
    else if (k == "class_margin") t.class_margin = it.value().get<double>();
    else if (k == "model_term_drop") t.model_term_drop = it.value().get<double>();
    else if (k == "root_residual") t.root_residual = it.value().get<double>();
    else if (k == "root_separation_rel") t.root_separation_rel = it.value().get<double>();
    else if (k == "quad_abstol") t.quad_abstol = it.value().get<double>();
    else if (k == "implicit_tol") t.implicit_tol = it.value().get<double>();
    else if (k == "implicit_max_iter") t.implicit_max_iter = it.value().get<int>();
    else if (k == "subset_cap") t.subset_cap = it.value().get<int>();
    else if (k == "orbit_cap") t.orbit_cap = it.value().get<double>();
    else if (k == "prime_sum_cap") t.prime_sum_cap = it.value().get<int>();
    else if (k == "separator_degenerate") t.separator_degenerate = it.value().get<double>();
    else if (k == "scan_steps") t.scan_steps = it.value().get<int>();
    else if (k == "double_root") t.double_root = it.value().get<double>();
    else if (k == "mu_intercept") t.mu_intercept = it.value().get<double>();
    else throw std::runtime_error("unknown tolerance key: " + k);
  }
  return t;
}

} // namespace qgraph
