#include "kohnbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kohnbound/errors.hpp"
#include "kohnbound/hermitian.hpp"
#include "kohnbound/parallel.hpp"

namespace kohnbound {

namespace {

// Sums and second cross-moments of two weighted integrands evaluated on a
// shared quadrature; the covariance term is what makes ratio standard
// errors honest when numerator and denominator share the samples.
struct Pass2 {
  double s1 = 0.0, s2 = 0.0;
  double m11 = 0.0, m22 = 0.0, m12 = 0.0;

  void accumulate(double w, double g1, double g2) {
    const double y1 = w * g1;
    const double y2 = w * g2;
    s1 += y1;
    s2 += y2;
    m11 += y1 * y1;
    m22 += y2 * y2;
    m12 += y1 * y2;
  }
  void merge(const Pass2& o) {
    s1 += o.s1;
    s2 += o.s2;
    m11 += o.m11;
    m22 += o.m22;
    m12 += o.m12;
  }
};

template <class Eval>
Pass2 run_pass2(const SurfaceQuadrature& quad, const Eval& eval) {
  const std::size_t count = quad.samples.size();
  if (count == 0) fail(errc::empty_quadrature, "no samples on the surface");
  std::vector<Pass2> partial(chunk_count(count, kDefaultChunk));
  parallel_chunks(count, kDefaultChunk,
                  [&](std::size_t ci, std::size_t begin, std::size_t end) {
                    Pass2 acc;
                    for (std::size_t i = begin; i < end; ++i) {
                      double g1 = 0.0, g2 = 0.0;
                      eval(quad.samples[i], g1, g2);
                      acc.accumulate(quad.samples[i].weight, g1, g2);
                    }
                    partial[ci] = acc;
                  });
  Pass2 total;
  for (const Pass2& p : partial) total.merge(p);
  return total;
}

double sample_var(double sumsq, double sum, double n) {
  if (n <= 1.5) return 0.0;
  return std::max(0.0, (n * sumsq - sum * sum) / (n - 1.0));
}

double sample_cov(double cross, double s1, double s2, double n) {
  if (n <= 1.5) return 0.0;
  return (n * cross - s1 * s2) / (n - 1.0);
}

// Ratio scale * s1/s2 with first-order error propagation.
BoundValue ratio_value(const Pass2& p, double scale, double n, bool mc) {
  BoundValue out;
  const double ratio = p.s1 / p.s2;
  out.value = scale * ratio;
  if (mc) {
    const double v1 = sample_var(p.m11, p.s1, n);
    const double v2 = sample_var(p.m22, p.s2, n);
    const double cv = sample_cov(p.m12, p.s1, p.s2, n);
    const double var =
        (v1 - 2.0 * ratio * cv + ratio * ratio * v2) / (p.s2 * p.s2);
    out.se = std::abs(scale) * std::sqrt(std::max(0.0, var));
  }
  return out;
}

// splitmix64; used for the deterministic residual spot checks.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ^ 0x6a09e667f3bcc909ULL) {
    for (int i = 0; i < 4; ++i) next();
  }
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a08c2b2f7f9dULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

ComplexPolynomial random_polynomial(std::size_t m, unsigned max_degree,
                                    Rng& rng, bool real_valued) {
  ComplexPolynomial p(m);
  const std::size_t terms = 4 + rng.below(4);
  for (std::size_t t = 0; t < terms; ++t) {
    ComplexPolynomial::Key key(2 * m, 0);
    unsigned total = 0;
    for (;;) {
      total = 0;
      for (unsigned& e : key) {
        e = static_cast<unsigned>(rng.below(max_degree + 1));
        total += e;
      }
      if (total >= 1 && total <= max_degree) break;
    }
    p.add_term(key, cplx(rng.symmetric(), rng.symmetric()));
  }
  if (real_valued) p += p.conjugated();
  return p;
}

}  // namespace

BoundMax bound_max(const DefiningFunction& f, const SurfaceQuadrature& quad) {
  const std::size_t count = quad.samples.size();
  if (count == 0) fail(errc::empty_quadrature, "no samples on the surface");
  const std::size_t m = f.ambient_dim();
  const std::size_t n = f.cr_dim();

  struct Partial {
    double min_len = std::numeric_limits<double>::infinity();
    RVec max_lhs;
  };
  std::vector<Partial> partial(chunk_count(count, kDefaultChunk));
  parallel_chunks(
      count, kDefaultChunk,
      [&](std::size_t ci, std::size_t begin, std::size_t end) {
        Partial acc;
        acc.max_lhs.assign(m, -std::numeric_limits<double>::infinity());
        for (std::size_t i = begin; i < end; ++i) {
          const MetricPoint mp = metric_at(f, quad.samples[i].point);
          acc.min_len = std::min(acc.min_len, mp.grad_len_sq);
          for (std::size_t j = 0; j < m; ++j)
            acc.max_lhs[j] = std::max(acc.max_lhs[j], condition_lhs(mp, j));
        }
        partial[ci] = acc;
      });

  double min_len = std::numeric_limits<double>::infinity();
  RVec max_lhs(m, -std::numeric_limits<double>::infinity());
  for (const Partial& p : partial) {
    min_len = std::min(min_len, p.min_len);
    for (std::size_t j = 0; j < m; ++j)
      max_lhs[j] = std::max(max_lhs[j], p.max_lhs[j]);
  }

  BoundMax out;
  out.verdicts.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.verdicts[j].max_lhs = max_lhs[j];
    out.verdicts[j].satisfied = max_lhs[j] <= 1e-9;
    out.applicable = out.applicable || out.verdicts[j].satisfied;
  }
  if (out.applicable) out.value = static_cast<double>(n) / min_len;
  return out;
}

BoundValue bound_hessian_ratio(const DefiningFunction& f,
                               const SurfaceQuadrature& quad) {
  const double n = static_cast<double>(f.cr_dim());
  const Pass2 p = run_pass2(
      quad, [&](const SurfaceSample& s, double& g1, double& g2) {
        const MetricPoint mp = metric_at(f, s.point);
        g1 = mp.r / mp.grad_len_sq;
        g2 = mp.s;
      });
  return ratio_value(p, n * n, static_cast<double>(quad.samples.size()),
                     quad.method == QuadMethod::monte_carlo);
}

BoundValue bound_flat_average(const DefiningFunction& f,
                              const SurfaceQuadrature& quad) {
  const std::size_t count = quad.samples.size();
  if (count == 0) fail(errc::empty_quadrature, "no samples on the surface");
  const std::size_t m = f.ambient_dim();
  const CMat eye = CMat::identity(m);

  struct Partial {
    Pass2 p;
    double defect = 0.0;
  };
  std::vector<Partial> partial(chunk_count(count, kDefaultChunk));
  parallel_chunks(count, kDefaultChunk,
                  [&](std::size_t ci, std::size_t begin, std::size_t end) {
                    Partial acc;
                    for (std::size_t i = begin; i < end; ++i) {
                      const MetricPoint mp =
                          metric_at(f, quad.samples[i].point);
                      acc.defect = std::max(
                          acc.defect, max_abs_diff(mp.jet.hessian, eye));
                      acc.p.accumulate(quad.samples[i].weight,
                                       1.0 / mp.grad_len_sq, 1.0);
                    }
                    partial[ci] = acc;
                  });
  Pass2 total;
  double defect = 0.0;
  for (const Partial& p : partial) {
    total.merge(p.p);
    defect = std::max(defect, p.defect);
  }
  if (defect > 1e-10)
    fail(errc::not_flat, "complex Hessian is not the identity on the surface");
  return ratio_value(total, static_cast<double>(f.cr_dim()),
                     static_cast<double>(count),
                     quad.method == QuadMethod::monte_carlo);
}

namespace {

CjDj cj_dj_impl(const DefiningFunction& f, const SurfaceQuadrature& quad,
                std::size_t j, bool& is_cr) {
  const double n = static_cast<double>(f.cr_dim());
  const double count = static_cast<double>(quad.samples.size());
  const bool mc = quad.method == QuadMethod::monte_carlo;
  const Pass2 p = run_pass2(
      quad, [&](const SurfaceSample& s, double& g1, double& g2) {
        const MetricPoint mp = metric_at(f, s.point);
        const double len = mp.grad_len_sq;
        const double raised = std::norm(mp.grad_raised[j]);
        g1 = raised / (len * len);
        g2 = mp.inv_metric(j, j).real() - raised / len;
      });

  CjDj out;
  out.c.value = p.s1;
  out.d.value = p.s2;
  if (mc) {
    out.c.se = std::sqrt(sample_var(p.m11, p.s1, count));
    out.d.se = std::sqrt(sample_var(p.m22, p.s2, count));
  }
  is_cr = out.d.value <= 3.0 * out.d.se ||
          out.d.value <= 1e-12 * std::max(1.0, out.c.value);
  if (!is_cr) {
    const BoundValue ratio = ratio_value(p, n * n, count, mc);
    out.ratio = ratio.value;
    out.ratio_se = ratio.se;
  }
  return out;
}

}  // namespace

CjDj cj_dj(const DefiningFunction& f, const SurfaceQuadrature& quad,
           std::size_t j) {
  if (j >= f.ambient_dim()) fail(errc::config_error, "trial index out of range");
  bool is_cr = false;
  CjDj out = cj_dj_impl(f, quad, j, is_cr);
  if (is_cr)
    fail(errc::trial_is_cr,
         "denominator integral is indistinguishable from zero");
  return out;
}

namespace {

// All monomials z^a zbar^b with 1 <= |a| + |b| <= degree, in a fixed
// deterministic order.
std::vector<ComplexPolynomial> monomial_family(std::size_t m, unsigned degree) {
  std::vector<ComplexPolynomial> out;
  ComplexPolynomial::Key key(2 * m, 0);
  const auto recurse = [&](const auto& self, std::size_t slot,
                           unsigned budget) -> void {
    if (slot == key.size()) {
      unsigned total = 0;
      for (unsigned e : key) total += e;
      if (total >= 1) {
        ComplexPolynomial p(m);
        p.add_term(key, 1.0);
        out.push_back(std::move(p));
      }
      return;
    }
    for (unsigned e = 0; e <= budget; ++e) {
      key[slot] = e;
      self(self, slot + 1, budget - e);
    }
    key[slot] = 0;
  };
  recurse(recurse, 0, degree);
  return out;
}

struct FrozenRatio {
  double estimate = 0.0;
  double se = 0.0;
};

// Re-evaluates a single combined trial function as the ratio
// int |box u|^2 / int pair(u, u), with the shared-sample covariance.
FrozenRatio frozen_ratio(const DefiningFunction& f,
                         const SurfaceQuadrature& quad,
                         const TrialFunction& trial) {
  const Pass2 p = run_pass2(
      quad, [&](const SurfaceSample& s, double& g1, double& g2) {
        const MetricPoint mp = metric_at(f, s.point);
        const AmbientJet jet = trial.jet(s.point);
        g1 = std::norm(kohn_apply_trace(mp, jet));
        g2 = dbar_b_pair(mp, jet, jet).real();
      });
  const BoundValue r =
      ratio_value(p, 1.0, static_cast<double>(quad.samples.size()),
                  quad.method == QuadMethod::monte_carlo);
  return {r.value, r.se};
}

}  // namespace

RayleighResult rayleigh_ritz(const DefiningFunction& f,
                             const SurfaceQuadrature& quad,
                             const std::vector<ComplexPolynomial>& trials) {
  const std::size_t count = quad.samples.size();
  if (count == 0) fail(errc::empty_quadrature, "no samples on the surface");
  const std::size_t t = trials.size();
  if (t == 0) fail(errc::config_error, "empty trial family");
  const std::size_t m = f.ambient_dim();

  std::vector<TrialFunction> cached;
  cached.reserve(t);
  unsigned degree = 0;
  for (const ComplexPolynomial& p : trials) {
    if (p.n_vars() != m)
      fail(errc::config_error, "trial variable count mismatch");
    degree = std::max(degree, p.total_degree());
    cached.emplace_back(p);
  }

  struct Partial {
    CMat a, b;
  };
  std::vector<Partial> partial(chunk_count(count, kDefaultChunk));
  parallel_chunks(
      count, kDefaultChunk,
      [&](std::size_t ci, std::size_t begin, std::size_t end) {
        Partial acc{CMat(t, t), CMat(t, t)};
        std::vector<AmbientJet> jets(t);
        CVec box(t);
        CMat pairing(m, m);
        CMat lowered(t, m);  // lowered(u, k) = sum_j pairing(j,k) u_jbar
        for (std::size_t i = begin; i < end; ++i) {
          const SurfaceSample& s = quad.samples[i];
          const MetricPoint mp = metric_at(f, s.point);
          const double inv_len = 1.0 / mp.grad_len_sq;
          for (std::size_t jj = 0; jj < m; ++jj)
            for (std::size_t k = 0; k < m; ++k)
              pairing(jj, k) = mp.inv_metric(jj, k) -
                               inv_len * mp.grad_raised[jj] *
                                   std::conj(mp.grad_raised[k]);
          for (std::size_t u = 0; u < t; ++u) {
            jets[u] = cached[u].jet(s.point);
            box[u] = kohn_apply_trace(mp, jets[u]);
            // lowered(u, jj) = P(jj, k) u_kbar, matching dbar_b_pair.
            for (std::size_t jj = 0; jj < m; ++jj) {
              cplx acc_l{};
              for (std::size_t k = 0; k < m; ++k)
                acc_l += pairing(jj, k) * jets[u].dzbar[k];
              lowered(u, jj) = acc_l;
            }
          }
          for (std::size_t u = 0; u < t; ++u)
            for (std::size_t v = 0; v < t; ++v) {
              acc.a(u, v) += s.weight * box[u] * std::conj(box[v]);
              cplx pr{};
              for (std::size_t k = 0; k < m; ++k)
                pr += lowered(u, k) * std::conj(jets[v].dzbar[k]);
              acc.b(u, v) += s.weight * pr;
            }
        }
        partial[ci] = std::move(acc);
      });

  CMat a(t, t), b(t, t);
  for (const Partial& p : partial)
    for (std::size_t u = 0; u < t; ++u)
      for (std::size_t v = 0; v < t; ++v) {
        a(u, v) += p.a(u, v);
        b(u, v) += p.b(u, v);
      }
  // Enforce exact Hermitian symmetry before the eigensolves.
  for (std::size_t u = 0; u < t; ++u)
    for (std::size_t v = u; v < t; ++v) {
      const cplx av = 0.5 * (a(u, v) + std::conj(a(v, u)));
      const cplx bv = 0.5 * (b(u, v) + std::conj(b(v, u)));
      a(u, v) = av;
      a(v, u) = std::conj(av);
      b(u, v) = bv;
      b(v, u) = std::conj(bv);
    }

  const EigenDecomposition be = hermitian_eig(b);
  double trace = 0.0;
  for (double v : be.values) trace += v;
  const double threshold = 1e-8 * trace / static_cast<double>(t);
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < t; ++k)
    if (be.values[k] > threshold) kept.push_back(k);
  if (kept.empty())
    fail(errc::no_non_cr_trial,
         "every trial is annihilated by the tangential CR operator");

  CMat w(t, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double scale = 1.0 / std::sqrt(be.values[kept[c]]);
    for (std::size_t u = 0; u < t; ++u)
      w(u, c) = be.vectors(u, kept[c]) * scale;
  }
  CMat reduced = w.adjoint() * a * w;
  for (std::size_t u = 0; u < kept.size(); ++u)
    for (std::size_t v = u; v < kept.size(); ++v) {
      const cplx rv = 0.5 * (reduced(u, v) + std::conj(reduced(v, u)));
      reduced(u, v) = rv;
      reduced(v, u) = std::conj(rv);
    }
  const EigenDecomposition re = hermitian_eig(reduced);

  CVec y(kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) y[c] = re.vectors(c, 0);
  const CVec coeff = w * y;
  ComplexPolynomial combined(m);
  for (std::size_t u = 0; u < t; ++u) {
    ComplexPolynomial scaled = trials[u];
    scaled *= coeff[u];
    combined += scaled;
  }
  const FrozenRatio fr = frozen_ratio(f, quad, TrialFunction(combined));

  RayleighResult out;
  out.degree = degree;
  out.estimate = fr.estimate;
  out.se = fr.se;
  out.trial_dim = t;
  out.dropped_null_dim = t - kept.size();
  return out;
}

RayleighResult rayleigh_ritz(const DefiningFunction& f,
                             const SurfaceQuadrature& quad, unsigned degree) {
  if (degree < 1) fail(errc::config_error, "trial degree must be at least 1");
  RayleighResult out =
      rayleigh_ritz(f, quad, monomial_family(f.ambient_dim(), degree));
  out.degree = degree;
  return out;
}

Takagi takagi_factorize(const CMat& q) {
  const std::size_t m = q.rows();
  if (m == 0 || q.cols() != m)
    fail(errc::config_error, "matrix must be square and non-empty");
  const double scale = std::max(1.0, q.max_abs());
  double sym_defect = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      sym_defect = std::max(sym_defect, std::abs(q(i, j) - q(j, i)));
  if (sym_defect > 1e-12 * scale)
    fail(errc::not_symmetric, "input matrix is not complex symmetric");

  // Real symmetric embedding: [x; y] is an eigenvector at sigma > 0 exactly
  // when u = x + i y satisfies Q conj(u) = sigma u.
  CMat embed(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double re = q(i, j).real();
      const double im = q(i, j).imag();
      embed(i, j) = re;
      embed(i, j + m) = im;
      embed(i + m, j) = im;
      embed(i + m, j + m) = -re;
    }
  const EigenDecomposition eig = hermitian_eig(embed);

  const double zero_tol = 1e-12 * scale;
  std::vector<std::pair<double, CVec>> picked;
  picked.reserve(m);
  for (std::size_t k = 2 * m; k-- > 0;) {
    const double sigma = eig.values[k];
    if (sigma <= zero_tol) break;
    CVec u(m);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = cplx(eig.vectors(i, k).real(), eig.vectors(i + m, k).real());
    picked.emplace_back(sigma, std::move(u));
  }

  // The kernel of the embedding holds both u and i*u for every null Takagi
  // direction; greedily extract a complex-orthonormal basis.
  for (std::size_t k = 0; k < 2 * m && picked.size() < m; ++k) {
    if (std::abs(eig.values[k]) > zero_tol) continue;
    CVec u(m);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = cplx(eig.vectors(i, k).real(), eig.vectors(i + m, k).real());
    for (const auto& [sigma, prev] : picked) {
      (void)sigma;
      cplx proj{};
      for (std::size_t i = 0; i < m; ++i) proj += std::conj(prev[i]) * u[i];
      for (std::size_t i = 0; i < m; ++i) u[i] -= proj * prev[i];
    }
    double len = 0.0;
    for (const cplx& c : u) len += std::norm(c);
    len = std::sqrt(len);
    if (len < 0.5) continue;
    for (cplx& c : u) c /= len;
    picked.emplace_back(0.0, std::move(u));
  }
  if (picked.size() != m)
    fail(errc::config_error, "embedding spectrum is inconsistent");

  Takagi out;
  out.lambda.resize(m);
  out.u = CMat(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    out.lambda[k] = picked[k].first;
    for (std::size_t i = 0; i < m; ++i) out.u(k, i) = picked[k].second[i];
  }
  return out;
}

RVec ellipsoid_normal_form(const CMat& q) {
  const Takagi tk = takagi_factorize(q);
  for (double a : tk.lambda)
    if (a >= 1.0)
      fail(errc::non_compact,
           "quadratic part dominates ||Z||^2; level sets are unbounded");
  return tk.lambda;
}

namespace {

double formula_equivalence_residual(const DefiningFunction& f,
                                    const SurfaceQuadrature& quad,
                                    std::size_t checks, Rng& rng) {
  const std::size_t count = quad.samples.size();
  double worst = 0.0;
  for (std::size_t c = 0; c < checks; ++c) {
    const SurfaceSample& s = quad.samples[rng.below(count)];
    const TrialFunction trial(
        random_polynomial(f.ambient_dim(), 3, rng, false));
    const MetricPoint mp = metric_at(f, s.point);
    const AmbientJet jet = trial.jet(s.point);
    const cplx a = kohn_apply_trace(mp, jet);
    const cplx b = kohn_apply_fields(mp, jet);
    worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
  }
  return worst;
}

}  // namespace

BoundReport compute_bounds(const DefiningFunction& f,
                           const SurfaceQuadrature& quad,
                           unsigned rayleigh_degree, bool exact_family,
                           std::uint64_t seed) {
  BoundReport report;
  report.volume = integrate(quad, [](const SurfaceSample&) { return 1.0; });
  report.bound_max_result = bound_max(f, quad);
  try {
    report.flat_average = bound_flat_average(f, quad);
  } catch (const error& e) {
    if (e.code() != errc::not_flat) throw;
  }
  report.hessian_ratio = bound_hessian_ratio(f, quad);
  if (exact_family)
    report.exact_sphere_value = static_cast<double>(f.cr_dim()) / quad.nu;

  const std::size_t m = f.ambient_dim();
  report.per_trial.resize(m);
  report.trial_is_cr.assign(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    bool is_cr = false;
    report.per_trial[j] = cj_dj_impl(f, quad, j, is_cr);
    report.trial_is_cr[j] = is_cr;
  }

  if (rayleigh_degree >= 1)
    report.rayleigh = rayleigh_ritz(f, quad, rayleigh_degree);

  Rng rng(seed ^ 0x5bf0a8b1c96d3a4fULL);
  report.residual_formula_equiv =
      formula_equivalence_residual(f, quad, 20, rng);

  const TrialFunction u(random_polynomial(m, 2, rng, true));
  const Pass2 p = run_pass2(
      quad, [&](const SurfaceSample& s, double& g1, double& g2) {
        const MetricPoint mp = metric_at(f, s.point);
        const AmbientJet jet = u.jet(s.point);
        g1 = dbar_b_pair(mp, jet, jet).real();
        g2 = (kohn_apply_trace(mp, jet) * std::conj(jet.value)).real();
      });
  report.residual_ibp = std::abs(p.s1 - p.s2);
  if (quad.method == QuadMethod::monte_carlo) {
    const double n = static_cast<double>(quad.samples.size());
    const double var = sample_var(p.m11, p.s1, n) +
                       sample_var(p.m22, p.s2, n) -
                       2.0 * sample_cov(p.m12, p.s1, p.s2, n);
    report.residual_ibp_se = std::sqrt(std::max(0.0, var));
  }
  return report;
}

}  // namespace kohnbound
