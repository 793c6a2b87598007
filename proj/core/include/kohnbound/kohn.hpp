#pragma once

#include <optional>

#include "kohnbound/metric.hpp"
#include "kohnbound/polynomial.hpp"
#include "kohnbound/surface.hpp"

namespace kohnbound {

/// Pointwise ambient jet of a trial function u: value, holomorphic and
/// antiholomorphic gradients, and the mixed second derivatives
/// mixed(j,k) = d_j d_kbar u.
struct AmbientJet {
  cplx value{};
  CVec dz;
  CVec dzbar;
  CMat mixed;
};

/// An ambient polynomial trial function with its formal derivatives cached
/// for fast repeated jet evaluation along a sample set.
class TrialFunction {
 public:
  explicit TrialFunction(ComplexPolynomial u);

  const ComplexPolynomial& poly() const { return u_; }
  std::size_t n_vars() const { return u_.n_vars(); }

  AmbientJet jet(const CVec& z) const;

 private:
  ComplexPolynomial u_;
  std::vector<ComplexPolynomial> dz_, dzbar_, mixed_;
};

/// Kohn-Laplacian on an ambient function through the trace identity
///   Box_b u = (|d rho|^-2 rho^k rho^jbar - rho^{jbar k}) u_{jbar k}
///             + n |d rho|^-2 rho^kbar u_kbar.
cplx kohn_apply_trace(const MetricPoint& mp, const AmbientJet& u);
cplx kohn_apply_trace(const DefiningFunction& f, const ComplexPolynomial& u,
                      const CVec& p, std::optional<double> nu = std::nullopt);

/// Same operator through the tangential CR fields X_{jk} = rho_k d_j -
/// rho_j d_k:  Box_b u = (1/2)|d rho|^-2 rho^{p kbar} rho^{q jbar}
/// X_{pq} X_{jbar kbar} u. Agrees with kohn_apply_trace pointwise.
cplx kohn_apply_fields(const MetricPoint& mp, const AmbientJet& u);
cplx kohn_apply_fields(const DefiningFunction& f, const ComplexPolynomial& u,
                       const CVec& p, std::optional<double> nu = std::nullopt);

/// Hermitian pairing of the tangential (0,1)-gradients: with
///   P(j,k) = rho^{j kbar} - |d rho|^-2 rho^j rho^kbar,
/// the value is P(j,k) u_kbar conj(v_jbar). Nonnegative on the diagonal;
/// integrates against dv to int (Box_b u) conj(v).
cplx dbar_b_pair(const MetricPoint& mp, const AmbientJet& u,
                 const AmbientJet& v);
cplx dbar_b_pair(const DefiningFunction& f, const ComplexPolynomial& u,
                 const ComplexPolynomial& v, const CVec& p,
                 std::optional<double> nu = std::nullopt);

/// The degenerate operator (|d rho|^-2 rho^j rho^kbar - rho^{j kbar})
/// d_j d_kbar applied to u.
cplx delta_tilde_apply(const MetricPoint& mp, const AmbientJet& u);
cplx delta_tilde_apply(const DefiningFunction& f, const ComplexPolynomial& u,
                       const CVec& p);

/// Delta-tilde applied to the gradient component rho_m, with the second
/// derivatives of rho_m read from the stored third-order jet.
cplx delta_tilde_grad(const MetricPoint& mp, std::size_t m);

/// Left-hand side of the sign condition
///   Re rho_jbar Dt rho_j + (1/n) |d rho|^2 |Dt rho_j|^2
/// at one point, for one index j.
double condition_lhs(const MetricPoint& mp, std::size_t j);

struct ConditionResult {
  double max_lhs = 0.0;
  bool satisfied = false;
};

/// Maximum of condition_lhs over the sample set; satisfied iff <= 1e-9.
ConditionResult condition_special_check(const DefiningFunction& f,
                                        const SurfaceQuadrature& quad,
                                        std::size_t j);

/// Levi form data in the admissible coframe with the coordinate of largest
/// |rho_k| permuted last: the explicit Levi matrix, its closed-form matrix
/// inverse (the conjugate of the raised tensor rho^{gamma betabar} -
/// rho^gamma rho^betabar / |d rho|^2, which inverts the Levi matrix
/// through the barred index), the raised gradient h^j = rho^j /
/// |d rho|^2, and the Reeb field as a complex tangent vector (in the
/// original coordinates).
struct LeviData {
  std::vector<std::size_t> perm;  // perm[i] = original index of slot i
  CMat levi;                      // h_{alpha betabar}, n x n
  CMat levi_inv;                  // h^{gamma betabar}, n x n
  CVec h_raised;                  // h^j over all n+1 original coordinates
  CVec reeb;                      // T^j; the real field is T^j d_j + conj d_jbar
};

LeviData levi_at(const MetricPoint& mp);
LeviData levi_at(const DefiningFunction& f, const CVec& p);

/// theta evaluated on a real tangent vector given by its complex
/// representation w: theta(v) = Im <grad rho, w>.
double theta_pairing(const Jet3& jet, const CVec& w);

}  // namespace kohnbound
