#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kohnbound/defining_function.hpp"
#include "kohnbound/types.hpp"

namespace kohnbound {

enum class QuadMethod { monte_carlo, product_grid };

struct QuadratureSpec {
  QuadMethod method = QuadMethod::monte_carlo;
  std::size_t count = 100000;
  std::uint64_t seed = 42;
  CVec center;  // empty means the origin
};

struct SurfaceSample {
  CVec point;     // p on M = rho^{-1}(nu)
  double weight;  // positive, in units of theta ^ (d theta)^n measure
  RVec direction; // unit vector in R^{2n+2} used for the radial solve
  double t;       // radius along the direction
};

struct SurfaceQuadrature {
  std::vector<SurfaceSample> samples;
  QuadMethod method = QuadMethod::monte_carlo;
  double nu = 0.0;
  CVec center;
};

/// Complex representation of a real tangent vector of R^{2m} ~ C^m:
/// w_j = v[2j] + i v[2j+1].
CVec complex_of_real(const RVec& v);
RVec real_of_complex(const CVec& w);

/// Real gradient of rho as a vector in R^{2m}: d rho(v) = dot(grad_r, v).
RVec real_gradient(const CVec& wirtinger_grad);

/// Solves rho(center + t * dir) = nu along a unit direction. Newton with a
/// bisection-safeguarded bracket, tolerance 1e-12 * max(1, |nu|), at most
/// 60 iterations.
double radial_solve(const DefiningFunction& f, double nu, const RVec& dir,
                    const CVec& center);

/// Evaluates theta ^ (d theta)^n on a frame of 2n+1 real tangent vectors at
/// p, where theta(v) = Im <grad rho, v> pairings and
/// d theta(v, w) = -2 Im(a_j rho_{j kbar} conj(b_k)). The sign convention
/// makes the round sphere positive on a positively oriented frame.
double contact_density(const DefiningFunction& f, const CVec& p,
                       const std::vector<RVec>& frame);
double contact_density(const Jet3& jet, const std::vector<RVec>& frame,
                       bool check_tangency);

/// Weighted sample set on the level set, star-shaped about spec.center.
/// Monte Carlo directions are uniform on the parameter sphere; weights push
/// the contact volume form through the exact Jacobian of the radial map.
/// Deterministic for fixed (seed, count), independent of the worker count.
SurfaceQuadrature sample_surface(const DefiningFunction& f, double nu,
                                 const QuadratureSpec& spec);

struct Integral {
  double value = 0.0;
  double se = 0.0;  // Monte Carlo standard error; 0 for product grids
};

struct ComplexIntegral {
  cplx value{};
  double se = 0.0;
};

Integral integrate(const SurfaceQuadrature& quad,
                   const std::function<double(const SurfaceSample&)>& g);
ComplexIntegral integrate_complex(
    const SurfaceQuadrature& quad,
    const std::function<cplx(const SurfaceSample&)>& g);

/// Surface area of the unit sphere S^{2m-1} in R^{2m}.
double sphere_area(std::size_t m);

}  // namespace kohnbound
