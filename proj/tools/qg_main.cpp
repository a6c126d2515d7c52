#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qgraph/charpoly.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/json_io.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/registry.hpp"
#include "qgraph/scattering.hpp"
#include "qgraph/spectra.hpp"
#include "qgraph/tolerances.hpp"

using namespace qgraph;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Output {
  std::string path; // empty = stdout
  std::ostringstream stream;
  ~Output() = default;
  void flush() {
    if (path.empty())
      std::cout << stream.str();
    else
      write_file(path, stream.str());
  }
};

struct Pipeline {
  Graph graph;
  ScatteringAssembly assembly;
  TrigPolynomial tp;
  SpectralModel model;
};

Pipeline load_pipeline(const std::string& file, const Tolerances& tol,
                       bool need_model = true) {
  Pipeline p;
  p.graph = load_graph_file(file);
  auto rep = p.graph.validate();
  if (!rep.valid) throw InvalidInput(file + ": " + rep.violations.front());
  p.assembly = assemble(p.graph);
  if (need_model) {
    p.tp = expand_determinant(p.assembly, tol);
    p.model = extract_model(p.tp, p.assembly, tol);
  }
  return p;
}

json model_to_json(const SpectralModel& m) {
  json terms = json::array();
  for (const auto& t : m.terms)
    terms.push_back({{"a", t.a}, {"S", t.S}, {"gamma", t.gamma}});
  return json{{"version", kVersion}, {"S0", m.S0},
              {"gamma0", m.gamma0},  {"alpha", m.alpha},
              {"class", to_string(m.cls)}, {"terms", terms}};
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dressed scaling quantum graph spectra"};
  app.require_subcommand(1);

  std::string tol_file;
  app.add_option("--tol-file", tol_file, "JSON tolerance overrides");

  if (const char* env = std::getenv("QG_THREADS")) {
#ifdef _OPENMP
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
#endif
  }

  std::string file, out_path, format = "csv", method = "all", family, name;
  double kval = 0.0, kmax = 10.0;
  int lmax = 16, nmax = 100, grid = 101, samples = 8;
  std::string nlist = "1,10,100";
  bool list_examples = false;

  auto* c_validate = app.add_subcommand("validate", "check a graph file");
  c_validate->add_option("file", file)->required();
  c_validate->add_option("--format", format);

  auto* c_charpoly =
      app.add_subcommand("charpoly", "emit the extracted spectral model");
  c_charpoly->add_option("file", file)->required();
  c_charpoly->add_option("--out", out_path);

  auto* c_classify = app.add_subcommand("classify", "regularity class + alpha");
  c_classify->add_option("file", file)->required();
  c_classify->add_option("--format", format);

  auto* c_orbits = app.add_subcommand("orbits", "prime periodic orbits (CSV)");
  c_orbits->add_option("file", file)->required();
  c_orbits->add_option("--lmax", lmax);
  c_orbits->add_option("--out", out_path);

  auto* c_entropy = app.add_subcommand("entropy", "orbit counts and entropy");
  c_entropy->add_option("file", file)->required();
  c_entropy->add_option("--lmax", lmax);
  c_entropy->add_option("--out", out_path);

  auto* c_spectrum = app.add_subcommand("spectrum", "per-level eigenvalues");
  c_spectrum->add_option("file", file)->required();
  c_spectrum->add_option("--n-max", nmax);
  c_spectrum->add_option("--lmax", lmax)->default_val(150);
  c_spectrum->add_option("--method", method)
      ->check(CLI::IsMember({"explicit", "implicit", "oracle", "all"}));
  c_spectrum->add_option("--out", out_path);

  auto* c_oracle = app.add_subcommand("oracle", "ground-truth roots (CSV)");
  c_oracle->add_option("file", file)->required();
  c_oracle->add_option("--kmax", kmax);
  c_oracle->add_option("--method", method)
      ->check(CLI::IsMember({"frame", "dense", "det"}))
      ->default_str("dense");
  c_oracle->add_option("--out", out_path);

  auto* c_staircase =
      app.add_subcommand("staircase", "k, N(k), Nbar(k) table");
  c_staircase->add_option("file", file)->required();
  c_staircase->add_option("--kmax", kmax);
  c_staircase->add_option("--samples-per-frame", samples);
  c_staircase->add_option("--out", out_path);

  auto* c_converge = app.add_subcommand(
      "converge", "explicit-formula error vs truncation length");
  c_converge->add_option("file", file)->required();
  c_converge->add_option("--n", nlist);
  c_converge->add_option("--lmax", lmax)->default_val(150);
  c_converge->add_option("--out", out_path);

  auto* c_regmap =
      app.add_subcommand("regmap", "classification over a parameter grid");
  c_regmap->add_option("--family", family)->required();
  c_regmap->add_option("--grid", grid);
  c_regmap->add_option("--out", out_path);

  auto* c_examples =
      app.add_subcommand("examples", "emit a named example graph file");
  c_examples->add_option("--name", name);
  c_examples->add_flag("--list", list_examples);
  c_examples->add_option("--out", out_path);
  c_examples->allow_extras(); // remaining --key value pairs are parameters

  auto* c_dump = app.add_subcommand("dump-smatrix", "S(k) as JSON");
  c_dump->add_option("file", file)->required();
  c_dump->add_option("--k", kval)->required();
  c_dump->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    const Tolerances tol =
        tol_file.empty() ? default_tolerances() : tolerances_from_file(tol_file);
    Output out;
    out.path = out_path;

    if (c_validate->parsed()) {
      Graph g = load_graph_file(file);
      auto rep = g.validate();
      if (format == "json") {
        json j{{"version", kVersion},
               {"valid", rep.valid},
               {"violations", rep.violations}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << (rep.valid ? "valid" : "invalid") << "\n";
        for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
      }
      if (!rep.valid) return 2;
      if (rep.valid) {
        ScatteringAssembly a = assemble(g);
        (void)a; // betas cached; assembly exercised
      }
      return 0;
    }

    if (c_charpoly->parsed()) {
      Pipeline p = load_pipeline(file, tol);
      out.stream << model_to_json(p.model).dump(2) << "\n";
      out.flush();
      return 0;
    }

    if (c_classify->parsed()) {
      Pipeline p = load_pipeline(file, tol);
      Classification c = classify(p.model, tol);
      if (format == "json") {
        json j{{"version", kVersion},
               {"class", to_string(c.cls)},
               {"alpha", c.alpha}};
        if (c.cls == RegularityClass::Regular) {
          j["u"] = c.u;
          j["allowed_width"] = c.allowed_width;
        }
        out.stream << j.dump(2) << "\n";
      } else {
        out.stream << to_string(c.cls) << " alpha=" << fmt(c.alpha) << "\n";
      }
      out.flush();
      return 0;
    }

    if (c_orbits->parsed()) {
      Pipeline p = load_pipeline(file, tol, false);
      auto primes = enumerate_primes(p.assembly, lmax, tol);
      std::sort(primes.begin(), primes.end(),
                [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
                  if (a.length != b.length) return a.length < b.length;
                  return a.code < b.code;
                });
      out.stream << "code,length,S_p0,Re_A_p,Im_A_p,prime\n";
      for (const auto& orb : primes)
        out.stream << orb.code_string() << ',' << orb.length << ','
                   << fmt(orb.action) << ',' << fmt(orb.weight.real()) << ','
                   << fmt(orb.weight.imag()) << ',' << (orb.prime ? 1 : 0)
                   << "\n";
      out.flush();
      return 0;
    }

    if (c_entropy->parsed()) {
      Pipeline p = load_pipeline(file, tol, false);
      OrbitCensus c = orbit_census(p.assembly, lmax, tol);
      json j{{"version", kVersion},
             {"l_max", c.l_max},
             {"closed_walks", c.closed_walks},
             {"prime_counts", c.prime_counts},
             {"entropy_estimate", c.entropy_estimate},
             {"log_spectral_radius", c.log_spectral_radius}};
      out.stream << j.dump(2) << "\n";
      out.flush();
      return 0;
    }

    if (c_spectrum->parsed()) {
      Pipeline p = load_pipeline(file, tol);
      SpectrumOptions opt;
      opt.n_max = nmax;
      opt.L = lmax;
      opt.want_explicit = method == "explicit" || method == "all";
      opt.want_implicit = method == "implicit" || method == "all";
      opt.want_oracle = true;
      auto rows = spectrum_table(p.model, p.assembly, opt, tol);
      out.stream
          << "n,khat_lo,khat_hi,k_explicit,k_implicit,k_oracle,rel_err_explicit,flags\n";
      for (const auto& r : rows)
        out.stream << r.n << ',' << fmt(r.khat_lo) << ',' << fmt(r.khat_hi)
                   << ',' << fmt(r.k_explicit) << ',' << fmt(r.k_implicit)
                   << ',' << fmt(r.k_oracle) << ',' << fmt(r.rel_err_explicit)
                   << ',' << r.flags << "\n";
      out.flush();
      return 0;
    }

    if (c_oracle->parsed()) {
      Pipeline p = load_pipeline(file, tol);
      RootScan scan;
      if (method == "frame") {
        determine_mu(p.model, tol);
        scan = find_roots(p.model, kmax, ScanMethod::FrameBisection, tol);
      } else if (method == "det") {
        scan = find_roots_detscan(p.assembly, kmax, p.model.alpha, tol);
      } else {
        scan = find_roots(p.model, kmax, ScanMethod::DenseScan, tol);
      }
      out.stream << "n,k,residual,multiplicity,degenerate\n";
      int n = 1;
      for (size_t i = 0; i < scan.roots.size(); ++i) {
        out.stream << n << ',' << fmt(scan.roots[i]) << ','
                   << fmt(scan.residuals[i]) << ',' << scan.multiplicity[i]
                   << ',' << (scan.degenerate[i] ? 1 : 0) << "\n";
        n += scan.multiplicity[i];
      }
      out.flush();
      return 0;
    }

    if (c_staircase->parsed()) {
      Pipeline p = load_pipeline(file, tol);
      if (p.model.cls == RegularityClass::Irregular)
        determine_mu_unchecked(p.model, tol);
      else
        determine_mu(p.model, tol);
      RootScan scan = find_roots(p.model, kmax, ScanMethod::DenseScan, tol);
      out.stream << "k,N,Nbar\n";
      const double step = std::numbers::pi / (p.model.S0 * samples);
      for (double k = 0.0; k <= kmax; k += step)
        out.stream << fmt(k) << ',' << staircase_count(scan, k) << ','
                   << fmt(average_staircase(p.model, k)) << "\n";
      out.flush();
      return 0;
    }

    if (c_converge->parsed()) {
      Graph g = load_graph_file(file);
      std::vector<int> ns = parse_int_list(nlist);
      std::vector<int> Ls;
      for (int L = 1; L <= lmax; ++L) Ls.push_back(L);
      auto rows = convergence_study(g, ns, Ls, tol);
      out.stream << "n,L,eps,k_explicit,k_oracle\n";
      for (const auto& r : rows)
        out.stream << r.n << ',' << r.L << ',' << fmt(r.eps) << ','
                   << fmt(r.k_explicit) << ',' << fmt(r.k_oracle) << "\n";
      out.flush();
      return 0;
    }

    if (c_regmap->parsed()) {
      struct Cell {
        double p1, p2, alpha;
        RegularityClass cls;
      };
      std::vector<Cell> cells(static_cast<size_t>(grid) * grid);
      auto build = [&](double p1, double p2) -> Graph {
        if (family == "four-vertex-chain") return four_vertex_chain(p1, p2);
        if (family == "two-delta-box")
          return make_example("two-deltas-in-box",
                              {{"lambda20", p1}, {"lambda30", p2}})
              .graph;
        if (family == "circle")
          return make_example("circle-step", {{"b", p1}, {"lambda", p2}}).graph;
        throw InvalidInput("unknown family: " + family);
      };
      auto coord = [&](int idx, double lo, double hi) {
        return lo + (hi - lo) * (idx + 0.5) / grid; // cell centers
      };
      const bool chain = family == "four-vertex-chain";
      const bool deltas = family == "two-delta-box";
      if (!chain && !deltas && family != "circle")
        throw InvalidInput("unknown family: " + family);
#pragma omp parallel for schedule(dynamic) collapse(2)
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          double p1 = chain ? coord(i, -1.0, 1.0)
                            : (deltas ? coord(i, 0.0, 8.0) : coord(i, 0.0, 1.0));
          double p2 = chain ? coord(j, -1.0, 1.0)
                            : (deltas ? coord(j, 0.0, 8.0) : coord(j, 0.0, 1.0));
          Graph g = build(p1, p2);
          ScatteringAssembly a = assemble(g);
          TrigPolynomial tp = expand_determinant_serial(a, tol);
          SpectralModel mdl = extract_model(tp, a, tol);
          cells[static_cast<size_t>(i) * grid + j] =
              {p1, p2, mdl.alpha, mdl.cls};
        }
      out.stream << "p1,p2,alpha,class\n";
      for (const auto& c : cells)
        out.stream << fmt(c.p1) << ',' << fmt(c.p2) << ',' << fmt(c.alpha)
                   << ',' << to_string(c.cls) << "\n";
      out.flush();
      return 0;
    }

    if (c_examples->parsed()) {
      if (list_examples) {
        for (const auto& e : example_registry()) {
          std::cout << e.name << ": " << e.summary;
          if (!e.params.empty()) {
            std::cout << " (";
            for (size_t i = 0; i < e.params.size(); ++i)
              std::cout << (i ? ", " : "") << "--" << e.params[i].name << " "
                        << e.params[i].value;
            std::cout << ")";
          }
          std::cout << "\n";
        }
        return 0;
      }
      if (name.empty()) throw InvalidInput("examples: --name required");
      std::map<std::string, double> overrides;
      auto extras = c_examples->remaining();
      for (size_t i = 0; i < extras.size(); ++i) {
        std::string key = extras[i];
        if (key.rfind("--", 0) != 0 || i + 1 >= extras.size())
          throw InvalidInput("examples: expected --param value pairs, got " +
                             key);
        overrides[key.substr(2)] = std::stod(extras[++i]);
      }
      BuiltExample ex = make_example(name, overrides);
      std::string text = ex.is_potential ? potential_to_json(ex.potential)
                                         : graph_to_json(ex.graph);
      if (out_path.empty())
        std::cout << text;
      else
        write_file(out_path, text);
      return 0;
    }

    if (c_dump->parsed()) {
      Pipeline p = load_pipeline(file, tol, false);
      Eigen::MatrixXcd S = p.assembly.S_of_k(kval);
      json rows = json::array();
      for (int r = 0; r < S.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < S.cols(); ++c)
          row.push_back({S(r, c).real(), S(r, c).imag()});
        rows.push_back(row);
      }
      json j{{"version", kVersion}, {"k", kval}, {"dim", S.rows()},
             {"S", rows}};
      out.stream << j.dump(2) << "\n";
      out.flush();
      return 0;
    }
  } catch (const ClassRefusal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceCap& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
