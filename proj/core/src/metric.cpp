#include "kohnbound/metric.hpp"

#include <cmath>

#include "kohnbound/errors.hpp"

namespace kohnbound {

MetricPoint metric_at(const DefiningFunction& f, const CVec& z) {
  MetricPoint mp;
  mp.z = z;
  mp.jet = f.jet(z);
  const std::size_t m = mp.jet.dim;

  const EigenDecomposition eig = hermitian_eig(mp.jet.hessian);
  double trace = 0.0;
  for (double lambda : eig.values) trace += lambda;
  const double mean = trace / static_cast<double>(m);
  if (eig.values.front() < 1e-10 * mean || mean <= 0.0)
    fail(errc::not_strictly_psh,
         "complex Hessian is not positive definite at the point");

  mp.hess_inv = hermitian_inverse(eig);
  // Eigenvalues of [rho^{j kbar}] = conj(hess_inv) are the reciprocals.
  mp.r = 1.0 / eig.values.front();
  double inv_trace = 0.0;
  for (double lambda : eig.values) inv_trace += 1.0 / lambda;
  mp.s = inv_trace - mp.r;

  mp.grad_raised.resize(m);
  const CVec hg = mp.hess_inv * mp.jet.grad;
  for (std::size_t j = 0; j < m; ++j) mp.grad_raised[j] = std::conj(hg[j]);
  // |d rho|^2 = rho_j rho^j, real and positive for a regular point.
  cplx len{};
  for (std::size_t j = 0; j < m; ++j) len += mp.jet.grad[j] * mp.grad_raised[j];
  mp.grad_len_sq = len.real();
  return mp;
}

CVec raise_index(const MetricPoint& mp, const CVec& v) {
  const std::size_t m = mp.dim();
  if (v.size() != m) fail(errc::config_error, "covector dimension mismatch");
  CVec u(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx acc{};
    for (std::size_t k = 0; k < m; ++k) acc += mp.inv_metric(j, k) * v[k];
    u[j] = acc;
  }
  return u;
}

}  // namespace kohnbound
