// Compares the OpenMP kernels against their serial references:
//   - determinant subset expansion
//   - regularity-map grid classification
//   - dense root-scan sampling
// Run: ./qg_bench [grid]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qgraph/charpoly.hpp"
#include "qgraph/oracle.hpp"
#include "qgraph/registry.hpp"
#include "qgraph/scattering.hpp"
#include "qgraph/spectra.hpp"

using namespace qgraph;
namespace chrono = std::chrono;

namespace {

double ms_since(chrono::steady_clock::time_point t0) {
  return chrono::duration<double, std::milli>(chrono::steady_clock::now() - t0)
      .count();
}

} // namespace

int main(int argc, char** argv) {
  const int grid = argc > 1 ? std::atoi(argv[1]) : 61;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif

  // subset expansion on the largest shipped topology (14 directed bonds)
  {
    Graph g = make_example("five-vertex-network").graph;
    ScatteringAssembly a = assemble(g);
    auto t0 = chrono::steady_clock::now();
    TrigPolynomial serial = expand_determinant_serial(a);
    const double t_serial = ms_since(t0);
    t0 = chrono::steady_clock::now();
    TrigPolynomial parallel = expand_determinant(a);
    const double t_parallel = ms_since(t0);
    double max_diff = 0.0;
    for (size_t i = 0; i < serial.terms.size(); ++i)
      max_diff = std::max(
          max_diff, std::abs(serial.terms[i].coeff - parallel.terms[i].coeff));
    std::printf(
        "expand_determinant  serial %8.2f ms  parallel %8.2f ms  speedup "
        "%5.2fx  terms %zu  max-diff %.3g\n",
        t_serial, t_parallel, t_serial / t_parallel, serial.terms.size(),
        max_diff);
  }

  // regularity map over the four-vertex-chain family
  {
    auto classify_grid = [&](bool parallel) {
      std::vector<double> alphas(static_cast<size_t>(grid) * grid);
#pragma omp parallel for schedule(dynamic) collapse(2) if (parallel)
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          const double r2 = -1.0 + 2.0 * (i + 0.5) / grid;
          const double r3 = -1.0 + 2.0 * (j + 0.5) / grid;
          ScatteringAssembly a = assemble(four_vertex_chain(r2, r3));
          SpectralModel m = extract_model(expand_determinant_serial(a), a);
          alphas[static_cast<size_t>(i) * grid + j] = m.alpha;
        }
      return alphas;
    };
    auto t0 = chrono::steady_clock::now();
    auto a1 = classify_grid(false);
    const double t_serial = ms_since(t0);
    t0 = chrono::steady_clock::now();
    auto a2 = classify_grid(true);
    const double t_parallel = ms_since(t0);
    double max_diff = 0.0;
    for (size_t i = 0; i < a1.size(); ++i)
      max_diff = std::max(max_diff, std::abs(a1[i] - a2[i]));
    std::printf(
        "regmap %dx%d        serial %8.2f ms  parallel %8.2f ms  speedup "
        "%5.2fx  max-diff %.3g\n",
        grid, grid, t_serial, t_parallel, t_serial / t_parallel, max_diff);
  }

  // dense scan sampling (the per-sample F evaluations are the hot loop)
  {
    Graph g = make_example("step-in-box").graph;
    ScatteringAssembly a = assemble(g);
    SpectralModel m = extract_model(expand_determinant_serial(a), a);
    const double k_max = 4000.0;
    auto t0 = chrono::steady_clock::now();
    RootScan scan = find_roots(m, k_max, ScanMethod::DenseScan);
    const double t_scan = ms_since(t0);
    std::printf("dense scan to k=%.0f: %zu roots in %8.2f ms\n", k_max,
                scan.roots.size(), t_scan);
  }
  return 0;
}
