#include "qgraph/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgraph {

using std::numbers::pi;

cplx TrigPolynomial::eval(double k) const {
  cplx sum = 0.0;
  for (const auto& t : terms) sum += t.coeff * std::exp(cplx(0.0, t.freq * k));
  return sum;
}

namespace {

// In-place LU determinant of the principal submatrix selected by mask.
// Stack buffer keeps the subset loop allocation-free.
cplx subset_det(const Eigen::MatrixXcd& T, std::uint32_t mask, int dim,
                cplx* buf, int* idx) {
  int n = 0;
  for (int I = 0; I < dim; ++I)
    if (mask & (1u << I)) idx[n++] = I;
  if (n == 0) return 1.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) buf[r * n + c] = T(idx[r], idx[c]);

  cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(buf[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double m = std::abs(buf[r * n + col]);
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(buf[piv * n + c], buf[col * n + c]);
      det = -det;
    }
    const cplx p = buf[col * n + col];
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      const cplx f = buf[r * n + col] / p;
      for (int c = col + 1; c < n; ++c) buf[r * n + c] -= f * buf[col * n + c];
    }
  }
  return det;
}

TrigPolynomial expand_impl(const ScatteringAssembly& a, const Tolerances& tol,
                           bool parallel) {
  const int dim = a.dim();
  if (dim > tol.subset_cap)
    throw SizeError("determinant expansion refused: 2*N_B = " +
                    std::to_string(dim) + " exceeds cap " +
                    std::to_string(tol.subset_cap));

  std::vector<double> action(dim), mag(dim);
  for (int I = 0; I < dim; ++I) {
    action[I] = a.dbonds[I].beta * a.dbonds[I].L;
    mag[I] = a.dbonds[I].A * a.dbonds[I].L;
  }

  const std::uint64_t n_subsets = 1ull << dim;
  TrigPolynomial tp;
  tp.n_directed = dim;

  int n_chunks = 1;
#ifdef _OPENMP
  if (parallel) n_chunks = std::max(1, omp_get_max_threads());
#endif
  const std::uint64_t chunk = (n_subsets + n_chunks - 1) / n_chunks;
  std::vector<std::vector<TrigTerm>> partial(n_chunks);

#pragma omp parallel for schedule(static, 1) if (parallel)
  for (int c = 0; c < n_chunks; ++c) {
    std::vector<cplx> buf(static_cast<size_t>(dim) * dim);
    std::vector<int> idx(dim);
    const std::uint64_t lo = c * chunk;
    const std::uint64_t hi = std::min(n_subsets, lo + chunk);
    auto& out = partial[c];
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      const auto m32 = static_cast<std::uint32_t>(mask);
      cplx det = subset_det(a.T, m32, dim, buf.data(), idx.data());
      if (det == 0.0) continue;
      double freq = 0.0, phase = 0.0;
      int popcount = 0;
      for (int I = 0; I < dim; ++I)
        if (m32 & (1u << I)) {
          freq += action[I];
          phase += mag[I];
          ++popcount;
        }
      cplx coeff = det * std::exp(cplx(0.0, phase));
      if (popcount & 1) coeff = -coeff;
      if (std::abs(coeff) < tol.coeff_drop) continue;
      out.push_back({m32, freq, coeff});
    }
  }

  size_t total = 0;
  for (const auto& p : partial) total += p.size();
  tp.terms.reserve(total);
  for (auto& p : partial)
    tp.terms.insert(tp.terms.end(), p.begin(), p.end());
  return tp;
}

} // namespace

TrigPolynomial expand_determinant(const ScatteringAssembly& a,
                                  const Tolerances& tol) {
  return expand_impl(a, tol, true);
}

TrigPolynomial expand_determinant_serial(const ScatteringAssembly& a,
                                         const Tolerances& tol) {
  return expand_impl(a, tol, false);
}

std::string to_string(RegularityClass c) {
  switch (c) {
    case RegularityClass::Regular: return "Regular";
    case RegularityClass::Marginal: return "Marginal";
    case RegularityClass::Irregular: return "Irregular";
  }
  return "?";
}

double SpectralModel::phi(double k) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.a * std::cos(t.S * k - pi * t.gamma);
  return sum;
}

double SpectralModel::F(double k) const {
  return std::cos(S0 * k - pi * gamma0) - phi(k);
}

namespace {

// a*cos(Sk - pi*gamma) as the phasor a*e^{-i pi gamma}
cplx term_phasor(const ModelTerm& t) {
  return t.a * std::exp(cplx(0.0, -pi * t.gamma));
}

// Splits phasor z into (a, gamma) with gamma in [0,1), snapping phases
// within 1e-13 of the axis so printed forms stay clean.
ModelTerm phasor_to_term(cplx z, double S) {
  double psi = std::arg(z);
  double mag = std::abs(z);
  if (std::abs(psi) < 1e-13) psi = 0.0;
  if (std::abs(psi - pi) < 1e-13 || std::abs(psi + pi) < 1e-13) psi = pi;
  ModelTerm t;
  t.S = S;
  if (psi > 0.0) {
    t.a = -mag;
    t.gamma = (pi - psi) / pi;
  } else {
    t.a = mag;
    t.gamma = -psi / pi;
  }
  if (t.gamma >= 1.0) t.gamma -= 1.0;
  if (t.gamma < 0.0) t.gamma = 0.0;
  return t;
}

} // namespace

SpectralModel extract_model(const TrigPolynomial& tp,
                            const ScatteringAssembly& a,
                            const Tolerances& tol) {
  if (tp.terms.empty()) throw ConsistencyError("empty trig polynomial");

  const double S0 = a.S0;
  const double gamma0 = a.gamma0;
  const double cluster_w = tol.freq_merge_rel * S0;

  // The full-subset term pins the determinant phase; it must agree with
  // gamma0 mod 1 (e^{-2 pi i gamma0} = det T / |det T|).
  const std::uint32_t full = (tp.n_directed == 32)
                                 ? 0xffffffffu
                                 : ((1u << tp.n_directed) - 1u);
  const TrigTerm* full_term = nullptr;
  for (const auto& t : tp.terms)
    if (t.subset == full) full_term = &t;
  if (!full_term)
    throw ConsistencyError("expansion lost the leading (full-subset) term");
  if (std::abs(full_term->freq - 2.0 * S0) > cluster_w * 4.0)
    throw ConsistencyError("leading frequency does not equal 2*S0");
  {
    const cplx expected = std::exp(cplx(0.0, -2.0 * pi * gamma0));
    const cplx got = full_term->coeff / std::abs(full_term->coeff);
    if (std::abs(expected - got) > tol.gamma_phase)
      throw ConsistencyError(
          "determinant phase disagrees with gamma0 (mod 1) by " +
          std::to_string(std::abs(expected - got)));
  }

  // Shift out e^{i(S0 k - pi gamma0)} term by term: frequency f = s - S0,
  // coefficient w = c * e^{i pi gamma0}. The result must be real-valued.
  struct Shifted {
    double f;
    cplx w;
  };
  std::vector<Shifted> shifted;
  shifted.reserve(tp.terms.size());
  const cplx rot = std::exp(cplx(0.0, pi * gamma0));
  for (const auto& t : tp.terms) shifted.push_back({t.freq - S0, t.coeff * rot});

  // Cluster by |f| so that +f/-f partners land together.
  std::sort(shifted.begin(), shifted.end(),
            [](const Shifted& x, const Shifted& y) {
              return std::abs(x.f) < std::abs(y.f);
            });

  SpectralModel m;
  m.S0 = S0;
  m.gamma0 = gamma0;

  double max_reality = 0.0;
  size_t i = 0;
  while (i < shifted.size()) {
    size_t j = i + 1;
    double f0 = std::abs(shifted[i].f);
    double fmax = f0;
    while (j < shifted.size() && std::abs(shifted[j].f) - fmax <= cluster_w) {
      fmax = std::max(fmax, std::abs(shifted[j].f));
      ++j;
    }
    // accumulate the +f phasor; -f members enter conjugated
    cplx zp = 0.0;
    double fsum = 0.0;
    bool is_const = f0 <= cluster_w;
    double im_const = 0.0;
    for (size_t t = i; t < j; ++t) {
      if (is_const) {
        zp += shifted[t].w;
        im_const += shifted[t].w.imag();
      } else if (shifted[t].f > 0.0) {
        zp += shifted[t].w;
      } else {
        zp += std::conj(shifted[t].w);
      }
      fsum += std::abs(shifted[t].f);
    }
    const double f = fsum / static_cast<double>(j - i);

    if (is_const) {
      max_reality = std::max(max_reality, std::abs(im_const));
      // R carries the constant once; after the /2 normalization Phi gets
      // its negative, kept as a signed amplitude at gamma = 0.
      const double val = zp.real() / 2.0;
      if (std::abs(val) > tol.model_term_drop)
        m.terms.push_back({-val, 0.0, 0.0});
    } else if (std::abs(f - S0) <= cluster_w) {
      // leading pair: must reduce to exactly cos(S0 k - pi gamma0)
      const cplx lead = zp / 2.0;
      const cplx expect = std::exp(cplx(0.0, -pi * gamma0));
      if (std::abs(lead - expect) > 1e-9)
        throw ConsistencyError("leading cosine pair is not unit-normalized");
    } else {
      if (f >= S0 - cluster_w)
        throw ConsistencyError("frequency at or above S0 in Phi");
      ModelTerm t = phasor_to_term(-zp / 2.0, f);
      if (std::abs(t.a) > tol.model_term_drop) m.terms.push_back(t);
    }
    i = j;
  }

  // Reality check of R(k) = e^{-i theta} Delta(k) e^{-i S0 k} at random k:
  // conjugate-pair bookkeeping above plus a direct numerical probe.
  {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.0, 50.0 / S0);
    double scale = 0.0;
    for (const auto& s : shifted) scale += std::abs(s.w);
    for (int probe = 0; probe < 100; ++probe) {
      const double k = dist(rng);
      cplx r = 0.0;
      for (const auto& s : shifted) r += s.w * std::exp(cplx(0.0, s.f * k));
      max_reality = std::max(max_reality, std::abs(r.imag()) / std::max(1.0, scale));
    }
    if (max_reality > tol.reality)
      throw ConsistencyError("non-real remainder after phase extraction: " +
                             std::to_string(max_reality));
  }

  std::sort(m.terms.begin(), m.terms.end(),
            [](const ModelTerm& x, const ModelTerm& y) { return x.S < y.S; });
  for (const auto& t : m.terms) m.alpha += std::abs(t.a);
  m.cls = classify(m, tol).cls;
  return m;
}

Classification classify(const SpectralModel& m, const Tolerances& tol) {
  Classification c;
  c.alpha = 0.0;
  for (const auto& t : m.terms) c.alpha += std::abs(t.a);
  if (std::abs(c.alpha - 1.0) <= tol.class_margin)
    c.cls = RegularityClass::Marginal;
  else if (c.alpha < 1.0)
    c.cls = RegularityClass::Regular;
  else
    c.cls = RegularityClass::Irregular;
  if (c.cls == RegularityClass::Regular) {
    c.u = std::acos(c.alpha) / m.S0;
    const double frame = pi / m.S0;
    c.allowed_width = frame - 2.0 * c.u;
    c.forbidden_width = 2.0 * c.u;
  }
  return c;
}

bool models_equivalent(const SpectralModel& a, const SpectralModel& b,
                       double tol_coeff, double* max_dev) {
  double dev = 0.0;
  auto fail = [&](double d) {
    if (max_dev) *max_dev = std::max(dev, d);
    return false;
  };
  if (std::abs(a.S0 - b.S0) > tol_coeff * std::max(1.0, a.S0))
    return fail(std::abs(a.S0 - b.S0));

  // gamma0 values may differ by an integer; an odd offset flips Phi.
  const double delta = a.gamma0 - b.gamma0;
  const double nearest = std::round(delta);
  if (std::abs(delta - nearest) > 1e-9) return fail(std::abs(delta - nearest));
  dev = std::max(dev, std::abs(delta - nearest));
  const double sign = (std::llround(nearest) % 2 == 0) ? 1.0 : -1.0;

  if (a.terms.size() != b.terms.size()) return fail(1.0);
  for (size_t i = 0; i < a.terms.size(); ++i) {
    const auto& ta = a.terms[i];
    const auto& tb = b.terms[i];
    if (std::abs(ta.S - tb.S) > 1e-9 * std::max(1.0, a.S0))
      return fail(std::abs(ta.S - tb.S));
    cplx pa = term_phasor(ta);
    cplx pb = sign * term_phasor(tb);
    if (ta.S == 0.0) { // constants compare by value
      pa = ta.a * std::cos(pi * ta.gamma);
      pb = sign * tb.a * std::cos(pi * tb.gamma);
    }
    dev = std::max(dev, std::abs(pa - pb));
    if (std::abs(pa - pb) > tol_coeff) return fail(0.0);
  }
  if (max_dev) *max_dev = dev;
  return true;
}

} // namespace qgraph
