#pragma once

#include "kohnbound/defining_function.hpp"
#include "kohnbound/hermitian.hpp"
#include "kohnbound/types.hpp"

namespace kohnbound {

/// Pointwise metric data derived from the complex Hessian of rho.
/// hess_inv is the Hermitian inverse of jet.hessian; the paper-convention
/// inverse metric rho^{j kbar} is its transpose, exposed by inv_metric().
struct MetricPoint {
  CVec z;
  Jet3 jet;
  CMat hess_inv;
  CVec grad_raised;        // rho^j = rho_kbar rho^{j kbar}
  double grad_len_sq = 0;  // |d rho|^2_rho
  double r = 0;            // spectral radius of [rho^{j kbar}]
  double s = 0;            // trace [rho^{j kbar}] - r

  std::size_t dim() const { return jet.dim; }

  /// rho^{j kbar}
  cplx inv_metric(std::size_t j, std::size_t k) const { return hess_inv(k, j); }
};

/// Computes all pointwise metric data at z. Throws NotStrictlyPsh when the
/// smallest Hessian eigenvalue falls below 1e-10 times the mean eigenvalue.
MetricPoint metric_at(const DefiningFunction& f, const CVec& z);

/// u^j = rho^{j kbar} v_kbar, with v passed as the components v_kbar.
CVec raise_index(const MetricPoint& mp, const CVec& v);

}  // namespace kohnbound
