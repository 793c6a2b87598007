#include "kohnbound/defining_function.hpp"

#include <cmath>

#include "kohnbound/errors.hpp"

namespace kohnbound {

struct DefiningFunction::Cache {
  // Polynomial kind: formal derivatives of rho.
  // Fubini-Study kind: formal derivatives of hol (grad only; the mixed
  // derivatives of the pluriharmonic part vanish).
  std::vector<ComplexPolynomial> grad;              // d/dz_j
  std::vector<ComplexPolynomial> hess;              // d/dz_j d/dzbar_k, j*m+k
  std::vector<ComplexPolynomial> third;             // (j*m+p)*m+q
};

DefiningFunction::DefiningFunction(Kind kind, ComplexPolynomial base)
    : kind_(kind), dim_(base.n_vars()), base_(std::move(base)) {
  auto cache = std::make_shared<Cache>();
  const std::size_t m = dim_;
  cache->grad.reserve(m);
  for (std::size_t j = 0; j < m; ++j)
    cache->grad.push_back(base_.derivative(j, false));
  if (kind_ == Kind::polynomial) {
    cache->hess.reserve(m * m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        cache->hess.push_back(cache->grad[j].derivative(k, true));
    cache->third.reserve(m * m * m);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
          cache->third.push_back(cache->hess[j * m + q].derivative(p, false));
  }
  cache_ = std::move(cache);
}

DefiningFunction DefiningFunction::from_polynomial(ComplexPolynomial rho) {
  if (!rho.is_real_valued())
    fail(errc::config_error, "defining polynomial is not real-valued");
  return DefiningFunction(Kind::polynomial, std::move(rho));
}

DefiningFunction DefiningFunction::fubini_study(ComplexPolynomial hol) {
  if (!hol.is_holomorphic())
    fail(errc::config_error, "fubini_study part must be holomorphic (no cJ terms)");
  return DefiningFunction(Kind::fubini_study, std::move(hol));
}

double DefiningFunction::value(const CVec& z) const {
  if (z.size() != dim_) fail(errc::config_error, "point dimension mismatch");
  if (kind_ == Kind::polynomial) return base_.eval(z).real();
  double t = 0.0;
  for (const cplx& zj : z) t += std::norm(zj);
  return std::log1p(t) + 2.0 * base_.eval(z).real();
}

CVec DefiningFunction::gradient(const CVec& z) const {
  if (z.size() != dim_) fail(errc::config_error, "point dimension mismatch");
  CVec g(dim_);
  if (kind_ == Kind::polynomial) {
    for (std::size_t j = 0; j < dim_; ++j) g[j] = cache_->grad[j].eval(z);
    return g;
  }
  double t = 0.0;
  for (const cplx& zj : z) t += std::norm(zj);
  const double inv = 1.0 / (1.0 + t);
  for (std::size_t j = 0; j < dim_; ++j)
    g[j] = std::conj(z[j]) * inv + cache_->grad[j].eval(z);
  return g;
}

Jet3 DefiningFunction::jet(const CVec& z) const {
  if (z.size() != dim_) fail(errc::config_error, "point dimension mismatch");
  const std::size_t m = dim_;
  Jet3 jet;
  jet.dim = m;
  jet.grad.resize(m);
  jet.hessian = CMat(m, m);
  jet.third.assign(m * m * m, cplx{});

  if (kind_ == Kind::polynomial) {
    jet.value = base_.eval(z).real();
    for (std::size_t j = 0; j < m; ++j) jet.grad[j] = cache_->grad[j].eval(z);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        jet.hessian(j, k) = cache_->hess[j * m + k].eval(z);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
          jet.third[(j * m + p) * m + q] =
              cache_->third[(j * m + p) * m + q].eval(z);
  } else {
    double t = 0.0;
    for (const cplx& zj : z) t += std::norm(zj);
    const double inv = 1.0 / (1.0 + t);
    jet.value = std::log1p(t) + 2.0 * base_.eval(z).real();
    for (std::size_t j = 0; j < m; ++j)
      jet.grad[j] = std::conj(z[j]) * inv + cache_->grad[j].eval(z);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        const cplx delta = (j == k) ? 1.0 : 0.0;
        jet.hessian(j, k) =
            inv * (delta - std::conj(z[j]) * z[k] * inv);
      }
    // rho_{j p qbar} of log(1+||Z||^2); the pluriharmonic part drops out.
    const double inv2 = inv * inv;
    const double inv3 = inv2 * inv;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
          cplx v = 2.0 * std::conj(z[j]) * std::conj(z[p]) * z[q] * inv3;
          if (j == q) v -= std::conj(z[p]) * inv2;
          if (p == q) v -= std::conj(z[j]) * inv2;
          jet.third[(j * m + p) * m + q] = v;
        }
  }
  // Enforce exact Hermitian symmetry of the complex Hessian.
  for (std::size_t j = 0; j < m; ++j) {
    jet.hessian(j, j) = jet.hessian(j, j).real();
    for (std::size_t k = j + 1; k < m; ++k) {
      const cplx avg = 0.5 * (jet.hessian(j, k) + std::conj(jet.hessian(k, j)));
      jet.hessian(j, k) = avg;
      jet.hessian(k, j) = std::conj(avg);
    }
  }
  return jet;
}

DefiningFunction make_ellipsoid(const RVec& a) {
  const std::size_t m = a.size();
  if (m < 2) fail(errc::config_error, "ellipsoid needs at least two variables");
  for (double aj : a) {
    if (aj < 0.0) fail(errc::config_error, "ellipsoid coefficients must be >= 0");
    if (aj >= 1.0)
      fail(errc::non_compact,
           "ellipsoid coefficient >= 1 gives a non-compact level set");
  }
  ComplexPolynomial rho(m);
  std::vector<unsigned> za(m, 0), zb(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    za[j] = 1;
    zb[j] = 1;
    rho.add_term(za, zb, 1.0);  // |z_j|^2
    zb[j] = 0;
    za[j] = 2;
    if (a[j] != 0.0) rho.add_term(za, zb, 0.5 * a[j]);  // Re(A_j z_j^2)
    za[j] = 0;
    zb[j] = 2;
    if (a[j] != 0.0) rho.add_term(za, zb, 0.5 * a[j]);
    zb[j] = 0;
  }
  return DefiningFunction::from_polynomial(std::move(rho));
}

DefiningFunction make_sphere(std::size_t n) {
  return make_ellipsoid(RVec(n + 1, 0.0));
}

}  // namespace kohnbound
