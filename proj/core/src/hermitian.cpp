#include "kohnbound/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kohnbound/errors.hpp"

namespace kohnbound {

namespace {

double off_diagonal_norm(const CMat& a) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) s += std::norm(a(p, q));
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition hermitian_eig(CMat a) {
  const std::size_t m = a.rows();
  if (m != a.cols()) fail(errc::non_hermitian, "matrix is not square");
  if (hermitian_defect(a) > 1e-12 * std::max(1.0, a.max_abs()))
    fail(errc::non_hermitian, "Hermitian defect too large");

  // Symmetrize so roundoff in the input does not bias the rotations.
  for (std::size_t p = 0; p < m; ++p) {
    a(p, p) = a(p, p).real();
    for (std::size_t q = p + 1; q < m; ++q) {
      const cplx avg = 0.5 * (a(p, q) + std::conj(a(q, p)));
      a(p, q) = avg;
      a(q, p) = std::conj(avg);
    }
  }

  CMat v = CMat::identity(m);
  double scale = a.max_abs();
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-15 * scale * static_cast<double>(m)) break;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        // Phase removal D = diag(e^{i phi}, 1), then a real Jacobi rotation.
        const cplx phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // g acts on columns p,q:
        //   g_pp = phase*c, g_pq = phase*s, g_qp = -s, g_qq = c.
        const cplx gpp = phase * c;
        const cplx gpq = phase * s;
        for (std::size_t i = 0; i < m; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = aip * gpp - aiq * s;
          a(i, q) = aip * gpq + aiq * c;
          const cplx vip = v(i, p);
          const cplx viq = v(i, q);
          v(i, p) = vip * gpp - viq * s;
          v(i, q) = vip * gpq + viq * c;
        }
        for (std::size_t j = 0; j < m; ++j) {
          const cplx apj = a(p, j);
          const cplx aqj = a(q, j);
          a(p, j) = std::conj(gpp) * apj - s * aqj;
          a(q, j) = std::conj(gpq) * apj + c * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenDecomposition out;
  out.values.resize(m);
  out.vectors = CMat(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < m; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double spectral_radius_hermitian(const CMat& h) {
  const EigenDecomposition eig = hermitian_eig(h);
  double r = 0.0;
  for (double lambda : eig.values) r = std::max(r, std::abs(lambda));
  return r;
}

CMat hermitian_inverse(const EigenDecomposition& eig) {
  const std::size_t m = eig.values.size();
  CMat inv(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < m; ++k)
        acc += eig.vectors(i, k) * std::conj(eig.vectors(j, k)) / eig.values[k];
      inv(i, j) = acc;
    }
  // Enforce exact Hermitian symmetry of the result.
  for (std::size_t i = 0; i < m; ++i) {
    inv(i, i) = inv(i, i).real();
    for (std::size_t j = i + 1; j < m; ++j) {
      const cplx avg = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
      inv(i, j) = avg;
      inv(j, i) = std::conj(avg);
    }
  }
  return inv;
}

}  // namespace kohnbound
