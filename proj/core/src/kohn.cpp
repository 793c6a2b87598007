#include "kohnbound/kohn.hpp"

#include <algorithm>
#include <cmath>

#include "kohnbound/errors.hpp"
#include "kohnbound/parallel.hpp"

namespace kohnbound {

namespace {

void check_on_surface(const DefiningFunction& f, const CVec& p, double nu) {
  if (std::abs(f.value(p) - nu) > 1e-10 * std::max(1.0, std::abs(nu)))
    fail(errc::not_on_surface, "point is not on the level set");
}

}  // namespace

TrialFunction::TrialFunction(ComplexPolynomial u) : u_(std::move(u)) {
  const std::size_t m = u_.n_vars();
  dz_.reserve(m);
  dzbar_.reserve(m);
  mixed_.reserve(m * m);
  for (std::size_t j = 0; j < m; ++j) {
    dz_.push_back(u_.derivative(j, false));
    dzbar_.push_back(u_.derivative(j, true));
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      mixed_.push_back(dz_[j].derivative(k, true));
}

AmbientJet TrialFunction::jet(const CVec& z) const {
  const std::size_t m = u_.n_vars();
  AmbientJet jet;
  jet.value = u_.eval(z);
  jet.dz.resize(m);
  jet.dzbar.resize(m);
  jet.mixed = CMat(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    jet.dz[j] = dz_[j].eval(z);
    jet.dzbar[j] = dzbar_[j].eval(z);
  }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) jet.mixed(j, k) = mixed_[j * m + k].eval(z);
  return jet;
}

cplx kohn_apply_trace(const MetricPoint& mp, const AmbientJet& u) {
  const std::size_t m = mp.dim();
  const double inv_len = 1.0 / mp.grad_len_sq;
  const std::size_t n = m - 1;
  cplx acc{};
  // u_{jbar k} = mixed(k, j); rho^{jbar k} = inv_metric(k, j).
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      acc += (inv_len * mp.grad_raised[k] * std::conj(mp.grad_raised[j]) -
              mp.inv_metric(k, j)) *
             u.mixed(k, j);
  for (std::size_t k = 0; k < m; ++k)
    acc += static_cast<double>(n) * inv_len * std::conj(mp.grad_raised[k]) *
           u.dzbar[k];
  return acc;
}

cplx kohn_apply_fields(const MetricPoint& mp, const AmbientJet& u) {
  const std::size_t m = mp.dim();
  const CVec& rho = mp.jet.grad;
  const CMat& hess = mp.jet.hessian;
  // rho_kbar, u_jbar, u_{jbar p} = mixed(p, j), rho_{kbar p} = hess(p, k).
  cplx acc{};
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          const cplx weight = mp.inv_metric(p, k) * mp.inv_metric(q, j);
          if (weight == cplx{}) continue;
          const cplx xx =
              rho[q] * std::conj(rho[k]) * u.mixed(p, j) +
              rho[q] * hess(p, k) * u.dzbar[j] -
              rho[q] * hess(p, j) * u.dzbar[k] -
              rho[q] * std::conj(rho[j]) * u.mixed(p, k) -
              rho[p] * std::conj(rho[k]) * u.mixed(q, j) -
              rho[p] * hess(q, k) * u.dzbar[j] +
              rho[p] * std::conj(rho[j]) * u.mixed(q, k) +
              rho[p] * hess(q, j) * u.dzbar[k];
          acc += weight * xx;
        }
  // The +1/2 prefactor is pinned by the equivalence with the trace
  // formula: contracting the expansion above with the inverse metric
  // reproduces exactly -2 |d rho|^2 times kohn_apply_trace.
  return 0.5 / mp.grad_len_sq * acc;
}

cplx dbar_b_pair(const MetricPoint& mp, const AmbientJet& u,
                 const AmbientJet& v) {
  const std::size_t m = mp.dim();
  const double inv_len = 1.0 / mp.grad_len_sq;
  // With P(j,k) = rho^{j kbar} - rho^j rho^kbar / |d rho|^2, the tangential
  // pairing is P(j,k) u_kbar conj(v_jbar): P annihilates the normal
  // direction in the k-slot against rho_kbar and in the j-slot against
  // rho_j, which makes the contraction independent of the ambient
  // extension of u and v.
  cplx acc{};
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      acc += (mp.inv_metric(j, k) -
              inv_len * mp.grad_raised[j] * std::conj(mp.grad_raised[k])) *
             u.dzbar[k] * std::conj(v.dzbar[j]);
  return acc;
}

cplx delta_tilde_apply(const MetricPoint& mp, const AmbientJet& u) {
  const std::size_t m = mp.dim();
  const double inv_len = 1.0 / mp.grad_len_sq;
  cplx acc{};
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      acc += (inv_len * mp.grad_raised[j] * std::conj(mp.grad_raised[k]) -
              mp.inv_metric(j, k)) *
             u.mixed(j, k);
  return acc;
}

cplx delta_tilde_grad(const MetricPoint& mp, std::size_t g) {
  const std::size_t m = mp.dim();
  const double inv_len = 1.0 / mp.grad_len_sq;
  cplx acc{};
  // d_j d_kbar rho_g = rho_{g j kbar}.
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      acc += (inv_len * mp.grad_raised[j] * std::conj(mp.grad_raised[k]) -
              mp.inv_metric(j, k)) *
             mp.jet.third_mixed(g, j, k);
  return acc;
}

double condition_lhs(const MetricPoint& mp, std::size_t j) {
  const std::size_t n = mp.dim() - 1;
  const cplx dt = delta_tilde_grad(mp, j);
  return (std::conj(mp.jet.grad[j]) * dt).real() +
         mp.grad_len_sq * std::norm(dt) / static_cast<double>(n);
}

ConditionResult condition_special_check(const DefiningFunction& f,
                                        const SurfaceQuadrature& quad,
                                        std::size_t j) {
  const std::size_t count = quad.samples.size();
  if (count == 0) fail(errc::empty_quadrature, "no samples on the surface");
  std::vector<double> partial(chunk_count(count, kDefaultChunk),
                              -std::numeric_limits<double>::infinity());
  parallel_chunks(count, kDefaultChunk,
                  [&](std::size_t ci, std::size_t begin, std::size_t end) {
                    double mx = -std::numeric_limits<double>::infinity();
                    for (std::size_t i = begin; i < end; ++i) {
                      const MetricPoint mp =
                          metric_at(f, quad.samples[i].point);
                      mx = std::max(mx, condition_lhs(mp, j));
                    }
                    partial[ci] = mx;
                  });
  ConditionResult out;
  out.max_lhs = *std::max_element(partial.begin(), partial.end());
  out.satisfied = out.max_lhs <= 1e-9;
  return out;
}

LeviData levi_at(const MetricPoint& mp) {
  const std::size_t m = mp.dim();
  const std::size_t n = m - 1;
  const CVec& rho = mp.jet.grad;
  const CMat& hess = mp.jet.hessian;

  double best = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < m; ++k)
    if (std::abs(rho[k]) > best) {
      best = std::abs(rho[k]);
      last = k;
    }
  if (best < 1e-12)
    fail(errc::degenerate_gradient, "d rho vanishes; not a regular level point");

  LeviData out;
  out.perm.resize(m);
  for (std::size_t i = 0, slot = 0; i < m; ++i)
    if (i != last) out.perm[slot++] = i;
  out.perm[n] = last;

  const cplx rw = rho[last];
  const cplx rww = hess(last, last);
  out.levi = CMat(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ia = out.perm[a];
      const std::size_t ib = out.perm[b];
      out.levi(a, b) = hess(ia, ib) -
                       rho[ia] * hess(last, ib) / rw -
                       std::conj(rho[ib]) * hess(ia, last) / std::conj(rw) +
                       rww * rho[ia] * std::conj(rho[ib]) / std::norm(rw);
    }

  // The raised tensor h^{gamma betabar} = rho^{gamma betabar} -
  // rho^gamma rho^betabar / |d rho|^2 inverts the Levi matrix through the
  // barred index (h^{gamma betabar} h_{alpha betabar} = delta); as a
  // matrix that is the transpose, so the matrix inverse stored here is its
  // entrywise conjugate.
  const double inv_len = 1.0 / mp.grad_len_sq;
  out.levi_inv = CMat(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ia = out.perm[a];
      const std::size_t ib = out.perm[b];
      out.levi_inv(a, b) = std::conj(
          mp.inv_metric(ia, ib) -
          inv_len * mp.grad_raised[ia] * std::conj(mp.grad_raised[ib]));
    }

  out.h_raised.resize(m);
  out.reeb.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.h_raised[j] = mp.grad_raised[j] * inv_len;
    out.reeb[j] = cplx(0.0, 1.0) * out.h_raised[j];
  }
  return out;
}

LeviData levi_at(const DefiningFunction& f, const CVec& p) {
  return levi_at(metric_at(f, p));
}

double theta_pairing(const Jet3& jet, const CVec& w) {
  cplx acc{};
  for (std::size_t j = 0; j < jet.dim; ++j) acc += jet.grad[j] * w[j];
  return acc.imag();
}

cplx kohn_apply_trace(const DefiningFunction& f, const ComplexPolynomial& u,
                      const CVec& p, std::optional<double> nu) {
  if (nu) check_on_surface(f, p, *nu);
  return kohn_apply_trace(metric_at(f, p), TrialFunction(u).jet(p));
}

cplx kohn_apply_fields(const DefiningFunction& f, const ComplexPolynomial& u,
                       const CVec& p, std::optional<double> nu) {
  if (nu) check_on_surface(f, p, *nu);
  return kohn_apply_fields(metric_at(f, p), TrialFunction(u).jet(p));
}

cplx dbar_b_pair(const DefiningFunction& f, const ComplexPolynomial& u,
                 const ComplexPolynomial& v, const CVec& p,
                 std::optional<double> nu) {
  if (nu) check_on_surface(f, p, *nu);
  const MetricPoint mp = metric_at(f, p);
  return dbar_b_pair(mp, TrialFunction(u).jet(p), TrialFunction(v).jet(p));
}

cplx delta_tilde_apply(const DefiningFunction& f, const ComplexPolynomial& u,
                       const CVec& p) {
  return delta_tilde_apply(metric_at(f, p), TrialFunction(u).jet(p));
}

}  // namespace kohnbound
