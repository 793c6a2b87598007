#pragma once

#include <cstdint>
#include <optional>

#include "kohnbound/kohn.hpp"
#include "kohnbound/metric.hpp"
#include "kohnbound/surface.hpp"

namespace kohnbound {

struct BoundValue {
  double value = 0.0;
  double se = 0.0;
};

/// The pointwise-max bound n * max_M |d rho|^-2. Only valid under the
/// sign condition on Delta-tilde rho_j for at least one j; when every j
/// violates it the value is withheld and applicable is false.
struct BoundMax {
  std::optional<double> value;
  std::vector<ConditionResult> verdicts;  // one per ambient coordinate
  bool applicable = false;
};

BoundMax bound_max(const DefiningFunction& f, const SurfaceQuadrature& quad);

/// The spectral-ratio bound n^2 int r |d rho|^-2 / int s, where r is the
/// spectral radius of the inverse Hessian and s the rest of its trace.
/// Standard error by first-order propagation with the sample covariance of
/// the two integrands (they share the quadrature).
BoundValue bound_hessian_ratio(const DefiningFunction& f,
                               const SurfaceQuadrature& quad);

/// The averaged bound n int |d rho|^-2 / v(M), valid only when the complex
/// Hessian is identically the identity; otherwise throws NotFlat. The
/// identity is checked at every sample to 1e-10.
BoundValue bound_flat_average(const DefiningFunction& f,
                              const SurfaceQuadrature& quad);

/// The single-trial quantities C_j = int |rho^j|^2 / |d rho|^4 and
/// D_j = int (rho^{j jbar} - |rho^j|^2 / |d rho|^2), and the bound
/// ratio = n^2 C_j / D_j. Throws TrialIsCR when D_j is within 3 standard
/// errors of zero (the trial conj(z_j) is CR on the surface).
struct CjDj {
  Integral c;
  Integral d;
  double ratio = 0.0;
  double ratio_se = 0.0;
};

CjDj cj_dj(const DefiningFunction& f, const SurfaceQuadrature& quad,
           std::size_t j);

/// Rayleigh-Ritz upper estimate from the monomial trial family
/// z^a zbar^b, 1 <= |a|+|b| <= degree. Gram matrices for the operator and
/// the (0,1)-gradient pairing are assembled on the shared quadrature; the
/// pairing null space (numerically CR directions) is dropped before the
/// generalized eigenproblem. The standard error comes from re-evaluating
/// the optimal combination as a ratio of two correlated integrals.
struct RayleighResult {
  unsigned degree = 0;
  double estimate = 0.0;
  double se = 0.0;
  std::size_t trial_dim = 0;
  std::size_t dropped_null_dim = 0;
};

RayleighResult rayleigh_ritz(const DefiningFunction& f,
                             const SurfaceQuadrature& quad, unsigned degree);
RayleighResult rayleigh_ritz(const DefiningFunction& f,
                             const SurfaceQuadrature& quad,
                             const std::vector<ComplexPolynomial>& trials);

/// Takagi factorization of a complex symmetric matrix: Q = U^t Lambda U
/// with U unitary and Lambda nonnegative diagonal (returned as its
/// diagonal, sorted descending). Computed through the eigen-decomposition
/// of the real symmetric embedding [[Re Q, Im Q], [Im Q, -Re Q]].
struct Takagi {
  CMat u;
  RVec lambda;
};

Takagi takagi_factorize(const CMat& q);

/// Diagonalizes the quadratic part of ||Z||^2 + Re(Z^t Q Z): returns the
/// Takagi values A_j (descending). Throws NonCompact when any A_j >= 1,
/// since the level sets are then unbounded.
RVec ellipsoid_normal_form(const CMat& q);

/// Everything the report carries for one surface and one quadrature.
struct BoundReport {
  Integral volume;
  BoundMax bound_max_result;
  std::optional<BoundValue> flat_average;  // absent when the Hessian is curved
  BoundValue hessian_ratio;
  std::optional<double> exact_sphere_value;  // n/nu, ellipsoid family only
  std::vector<CjDj> per_trial;               // entry j may be flagged below
  std::vector<bool> trial_is_cr;
  std::optional<RayleighResult> rayleigh;
  double residual_formula_equiv = 0.0;  // max relative trace-vs-fields gap
  double residual_ibp = 0.0;            // |int pair - Re int (box u) conj u|
  double residual_ibp_se = 0.0;
};

/// Runs every applicable bound plus the internal consistency checks on a
/// shared quadrature. `exact_family` marks surfaces of the ellipsoid
/// family, for which n/nu is reported as the known first eigenvalue.
BoundReport compute_bounds(const DefiningFunction& f,
                           const SurfaceQuadrature& quad,
                           unsigned rayleigh_degree, bool exact_family,
                           std::uint64_t seed);

}  // namespace kohnbound
