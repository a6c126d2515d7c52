#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qgraph/oracle.hpp"
#include "qgraph/orbits.hpp"
#include "qgraph/registry.hpp"
#include "qgraph/spectra.hpp"

using namespace qgraph;
using std::numbers::pi;

namespace {

struct Built {
  ScatteringAssembly a;
  SpectralModel m;
};

Built build(const Graph& g, bool with_mu = true) {
  Built b;
  b.a = assemble(g);
  b.m = extract_model(expand_determinant(b.a), b.a);
  if (with_mu) determine_mu(b.m);
  return b;
}

Graph free_box() {
  return Graph(2, {{0, 1, 1.0, 0.0, 0.0}},
               {VertexCondition::dirichlet(), VertexCondition::dirichlet()});
}

Built example1() {
  return build(make_example("step-in-box", {{"b", 0.3}, {"lambda", 0.5}}).graph);
}

} // namespace

TEST_CASE("free box: mu places k_1 = pi in frame 1; frames telescope") {
  Built b = build(free_box());
  CHECK(b.m.mu == -3); // gamma0 = 2.5, khat_n = pi (n + 1/2)
  for (int n = 1; n <= 20; ++n) {
    LevelFrame fr = separators(b.m, n);
    CHECK(fr.k_lo == doctest::Approx(pi * (n - 0.5)).epsilon(1e-14));
    CHECK(fr.k_hi == doctest::Approx(pi * (n + 0.5)).epsilon(1e-14));
    CHECK(fr.k_avg == doctest::Approx(0.5 * (fr.k_lo + fr.k_hi)));
    if (n > 1) CHECK(fr.k_lo == separators(b.m, n - 1).k_hi);
  }
}

TEST_CASE("example 1: every oracle root n <= 500 lies in frame n") {
  Built b = example1();
  const int N = 500;
  RootScan scan =
      find_roots(b.m, separators(b.m, N).k_hi + 1e-9, ScanMethod::DenseScan);
  REQUIRE(static_cast<int>(scan.roots.size()) >= N);
  for (int n = 1; n <= N; ++n) {
    LevelFrame fr = separators(b.m, n);
    CHECK(scan.roots[n - 1] > fr.k_lo);
    CHECK(scan.roots[n - 1] < fr.k_hi);
  }
}

TEST_CASE("shifting mu by +1 misassigns every frame") {
  Built b = example1();
  RootScan scan = find_roots(b.m, separators(b.m, 50).k_hi, ScanMethod::DenseScan);
  SpectralModel wrong = b.m;
  wrong.mu += 1;
  int inside = 0;
  for (int n = 1; n <= 40; ++n) {
    LevelFrame fr = separators(wrong, n);
    if (scan.roots[n - 1] > fr.k_lo && scan.roots[n - 1] < fr.k_hi) ++inside;
  }
  CHECK(inside == 0);
}

TEST_CASE("determine_mu search-window error when no root exists") {
  // cos(S0 k - pi gamma0) = Phi has roots for alpha < 1 always, so force the
  // failure with a doctored model: constant Phi slightly above 1 has none.
  SpectralModel fake;
  fake.S0 = 1.0;
  fake.gamma0 = 0.0;
  fake.terms = {{1.02, 0.0, 0.0}};
  fake.alpha = 1.02;
  fake.cls = RegularityClass::Irregular;
  CHECK_THROWS_AS(determine_mu_unchecked(fake), SearchWindowError);
}

TEST_CASE("regular four-vertex chain: oracle roots inside allowed zones") {
  Built b = build(four_vertex_chain(0.2, 0.3));
  const int N = 200;
  RootScan scan =
      find_roots(b.m, separators(b.m, N).k_hi + 1e-9, ScanMethod::FrameBisection);
  REQUIRE(static_cast<int>(scan.roots.size()) >= N);
  for (int n = 1; n <= N; ++n) {
    LevelFrame fr = separators(b.m, n);
    REQUIRE(fr.has_zone);
    CHECK(scan.roots[n - 1] >= fr.zone_lo - 1e-12);
    CHECK(scan.roots[n - 1] <= fr.zone_hi + 1e-12);
  }
}

TEST_CASE("piercing: staircase fluctuation at separators decays with L") {
  // two-bond chains vanish termwise at the separators (complement-walk
  // pairing), so example 1 is checked for exact vanishing and the
  // four-vertex chain carries the genuine decay check.
  Built b1 = example1();
  for (int L : {25, 150})
    for (int n = 1; n <= 50; ++n)
      CHECK(std::abs(staircase_fluctuation(b1.a, separators(b1.m, n).k_hi, L)) <
            1e-12);

  Built b4 = build(four_vertex_chain(0.2, 0.3));
  std::vector<double> medians;
  for (int L : {25, 50, 100, 150}) {
    std::vector<double> vals;
    for (int n = 1; n <= 50; ++n)
      vals.push_back(
          std::abs(staircase_fluctuation(b4.a, separators(b4.m, n).k_hi, L)));
    std::sort(vals.begin(), vals.end());
    medians.push_back(vals[vals.size() / 2]);
  }
  CHECK(medians.back() < medians.front());
  CHECK(medians.back() < 0.05);
}

TEST_CASE("Nbar + N~_L tracks the exact staircase away from jumps") {
  Built b = example1();
  const int L = 150;
  const double k_hi = separators(b.m, 40).k_hi;
  RootScan scan = find_roots(b.m, k_hi + 1.0, ScanMethod::DenseScan);
  const double exclusion = 0.2;
  int checked = 0;
  for (double k = 1.0; k < k_hi; k += 0.37) {
    double dist = 1e9;
    for (double r : scan.roots) dist = std::min(dist, std::abs(k - r));
    if (dist < exclusion) continue;
    const double smooth =
        average_staircase(b.m, k) + staircase_fluctuation(b.a, k, L);
    CHECK(std::abs(smooth - staircase_count(scan, k)) < 0.5);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("explicit spectrum: prime-sum and trace-resum agree at L = 12") {
  for (const auto& name : {"step-in-box", "two-steps-in-box", "star"}) {
    Built b = build(make_example(name).graph);
    for (int n : {1, 3, 17}) {
      const double ps =
          eigenvalue_explicit(b.m, b.a, n, 12, ExplicitMode::PrimeSum);
      const double tr =
          eigenvalue_explicit(b.m, b.a, n, 12, ExplicitMode::TraceResum);
      CHECK(std::abs(ps - tr) < 1e-9);
    }
  }
}

TEST_CASE("explicit spectrum refusals") {
  Built b = example1();
  CHECK_THROWS_AS(
      eigenvalue_explicit(b.m, b.a, 1, 30, ExplicitMode::PrimeSum),
      ResourceCap);
  Built irr = build(four_vertex_chain(0.98, 0.99), false);
  determine_mu_unchecked(irr.m);
  CHECK_THROWS_AS(
      eigenvalue_explicit(irr.m, irr.a, 1, 20, ExplicitMode::TraceResum),
      ClassRefusal);
}

TEST_CASE("free box: all three methods return n pi") {
  Built b = build(free_box());
  RootScan scan = find_roots(b.m, 101 * pi, ScanMethod::FrameBisection);
  for (int n : {1, 2, 5, 20, 100}) {
    CHECK(std::abs(eigenvalue_explicit(b.m, b.a, n, 150,
                                       ExplicitMode::TraceResum) -
                   n * pi) < 1e-10);
    CHECK(std::abs(eigenvalue_implicit(b.m, n).k - n * pi) < 1e-10);
    CHECK(std::abs(scan.roots[n - 1] - n * pi) < 1e-10);
    // single bounce orbit, sin(nu omega_p / 2) = sin(nu pi) = 0 termwise
    CHECK(std::abs(eigenvalue_simplified(b.m, b.a, n, 12) - n * pi) < 1e-12);
  }
}

TEST_CASE("simplified sine form matches the explicit expansion") {
  Built b = example1();
  CHECK(std::abs(b.m.mu + b.m.gamma0 + 0.5) < 1e-12);
  for (int n : {1, 7, 40}) {
    CHECK(std::abs(eigenvalue_simplified(b.m, b.a, n, 12, ExplicitMode::PrimeSum) -
                   eigenvalue_explicit(b.m, b.a, n, 12, ExplicitMode::PrimeSum)) <
          1e-9);
    CHECK(std::abs(
              eigenvalue_simplified(b.m, b.a, n, 100, ExplicitMode::TraceResum) -
              eigenvalue_explicit(b.m, b.a, n, 100, ExplicitMode::TraceResum)) <
          1e-9);
  }
  // antisymmetry of the sine series: k_{-n} = -k_n
  for (int n : {2, 9}) {
    const double plus =
        eigenvalue_simplified(b.m, b.a, n, 12, ExplicitMode::PrimeSum);
    const double minus =
        eigenvalue_simplified(b.m, b.a, -n, 12, ExplicitMode::PrimeSum);
    CHECK(std::abs(plus + minus) < 1e-12);
  }
}

TEST_CASE("simplified form refuses when its reduction fails") {
  // circle: gamma0 integer, mu + gamma0 + 1/2 != 0
  Built circle = build(make_example("circle-step").graph);
  CHECK_THROWS_WITH_AS(
      eigenvalue_simplified(circle.m, circle.a, 1, 10),
      doctest::Contains("mu + gamma0 + 1/2"), InvalidInput);
  // delta vertex: lambda0 != 0
  Built delta = build(make_example("delta-in-box").graph);
  CHECK_THROWS_WITH_AS(eigenvalue_simplified(delta.m, delta.a, 1, 10),
                       doctest::Contains("lambda0"), InvalidInput);
}

TEST_CASE("implicit equation: oracle-level agreement on regular graphs") {
  {
    Built b = build(make_example("delta-in-box", {{"x0", 0.5}, {"lambda0", 1.0}})
                        .graph);
    RootScan scan =
        find_roots(b.m, separators(b.m, 100).k_hi, ScanMethod::FrameBisection);
    for (int n = 1; n <= 100; ++n) {
      ImplicitResult ir = eigenvalue_implicit(b.m, n);
      CHECK_FALSE(ir.bisect_fallback);
      CHECK(std::abs(ir.k - scan.roots[n - 1]) < 1e-12);
    }
  }
  {
    Built b = build(four_vertex_chain(0.2, 0.3));
    RootScan scan =
        find_roots(b.m, separators(b.m, 200).k_hi, ScanMethod::FrameBisection);
    for (int n = 1; n <= 200; ++n)
      CHECK(std::abs(eigenvalue_implicit(b.m, n).k - scan.roots[n - 1]) <
            1e-12);
  }
}

TEST_CASE("implicit equation refuses marginal and irregular graphs") {
  Built star = build(make_example("star").graph);
  CHECK_THROWS_AS(eigenvalue_implicit(star.m, 1), ClassRefusal);
}

TEST_CASE("moments: p = 1 reproduces the explicit value; free box energies") {
  Built b = example1();
  for (int n : {1, 5, 30})
    CHECK(std::abs(moment(b.m, b.a, 1, n, 60) -
                   eigenvalue_explicit(b.m, b.a, n, 60,
                                       ExplicitMode::TraceResum)) < 1e-10);

  // p = 2 carries genuine truncation error; at L = 150 the free-box
  // energies are recovered to ~1e-5 relative
  Built fb = build(free_box());
  for (int n : {1, 4, 9})
    CHECK(moment(fb.m, fb.a, 2, n, 150) ==
          doctest::Approx(n * n * pi * pi).epsilon(1e-4));
}

TEST_CASE("moment p = 2 tracks the oracle energy at L = 150") {
  Built b = example1();
  RootScan scan =
      find_roots(b.m, separators(b.m, 30).k_hi, ScanMethod::FrameBisection);
  for (int n : {1, 10, 30}) {
    const double e = moment(b.m, b.a, 2, n, 150);
    const double oracle = scan.roots[n - 1] * scan.roots[n - 1];
    CHECK(std::abs(e - oracle) / oracle < 2e-3);
  }
}

TEST_CASE("truncation error decreases with L (median over 100 levels)") {
  Built b = example1();
  RootScan scan =
      find_roots(b.m, separators(b.m, 100).k_hi, ScanMethod::FrameBisection);
  std::vector<double> medians;
  for (int L : {10, 20, 40, 80, 150}) {
    std::vector<double> errs;
    for (int n = 1; n <= 100; ++n)
      errs.push_back(std::abs(
          eigenvalue_explicit(b.m, b.a, n, L, ExplicitMode::TraceResum) -
          scan.roots[n - 1]));
    std::sort(errs.begin(), errs.end());
    medians.push_back(errs[errs.size() / 2]);
  }
  for (size_t i = 1; i < medians.size(); ++i)
    CHECK(medians[i] <= medians[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("method agreement: explicit, implicit, oracle pairwise close") {
  Built b = example1();
  RootScan scan =
      find_roots(b.m, separators(b.m, 100).k_hi, ScanMethod::FrameBisection);
  for (int n = 1; n <= 100; ++n) {
    const double ex =
        eigenvalue_explicit(b.m, b.a, n, 150, ExplicitMode::TraceResum);
    const double im = eigenvalue_implicit(b.m, n).k;
    const double orc = scan.roots[n - 1];
    const double tol_pair = 1e-3 * orc;
    CHECK(std::abs(ex - im) < tol_pair);
    CHECK(std::abs(ex - orc) < tol_pair);
    CHECK(std::abs(im - orc) < 1e-10);
  }
}

TEST_CASE("marginal graphs: frames still bracket exactly one root") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ud(0.1, 0.9);
  for (int rep = 0; rep < 3; ++rep) {
    Built circ = build(
        make_example("circle-step", {{"b", ud(rng)}, {"lambda", ud(rng)}}).graph);
    RootScan scan = find_roots(circ.m, separators(circ.m, 200).k_hi + 1e-9,
                               ScanMethod::FrameBisection);
    REQUIRE(static_cast<int>(scan.roots.size()) >= 200);
    for (int n = 1; n <= 200; ++n) {
      CHECK(scan.frame[n - 1] == n);
      CHECK_FALSE(scan.degenerate[n - 1]);
    }
  }
}

TEST_CASE("free ring hits the marginal special case and is detected") {
  // circle with no step at all: Phi = 1, double eigenvalues sitting exactly
  // on the separators
  Graph g = make_example("circle-step", {{"b", 0.5}, {"lambda", 0.0}}).graph;
  ScatteringAssembly a = assemble(g);
  SpectralModel m = extract_model(expand_determinant(a), a);
  CHECK(m.cls == RegularityClass::Marginal);

  // dense scan resolves each double eigenvalue near a multiple of 2 pi and
  // never reports the trivial k = 0 mode
  RootScan scan = find_roots(m, 20.0, ScanMethod::DenseScan);
  REQUIRE(!scan.roots.empty());
  int count = 0;
  for (size_t i = 0; i < scan.roots.size(); ++i) {
    const double q = scan.roots[i] / (2.0 * pi);
    CHECK(std::abs(q - std::round(q)) < 1e-6);
    CHECK(scan.roots[i] > 1.0);
    count += scan.multiplicity[i];
  }
  CHECK(count >= 4);

  // the frame bisection cannot claim separator-sitting roots; the spectrum
  // table flags those levels and withholds the explicit value
  determine_mu(m);
  SpectrumOptions opt;
  opt.n_max = 4;
  opt.L = 20;
  opt.want_implicit = false;
  auto rows = spectrum_table(m, a, opt);
  bool flagged = false;
  for (const auto& r : rows)
    if (r.flags.find("no-root") != std::string::npos ||
        r.flags.find("separator-degenerate") != std::string::npos) {
      flagged = true;
      CHECK(std::isnan(r.k_explicit));
    }
  CHECK(flagged);
}

TEST_CASE("spectrum table: columns, flags, and irregular refusal") {
  Built b = example1();
  SpectrumOptions opt;
  opt.n_max = 25;
  opt.L = 60;
  auto rows = spectrum_table(b.m, b.a, opt);
  REQUIRE(rows.size() == 25);
  for (const auto& r : rows) {
    CHECK(r.khat_lo < r.k_oracle);
    CHECK(r.k_oracle < r.khat_hi);
    CHECK(r.rel_err_explicit < 1e-2);
    CHECK(std::abs(r.k_implicit - r.k_oracle) < 1e-10);
    CHECK(r.flags.empty());
    CHECK(r.residual < 1.0);
  }

  Built irr = build(four_vertex_chain(0.98, 0.99), false);
  CHECK_THROWS_AS(spectrum_table(irr.m, irr.a, opt), ClassRefusal);
  SpectrumOptions oracle_only;
  oracle_only.n_max = 10;
  oracle_only.want_explicit = oracle_only.want_implicit = false;
  auto irows = spectrum_table(irr.m, irr.a, oracle_only);
  CHECK(irows.size() == 10);
}
