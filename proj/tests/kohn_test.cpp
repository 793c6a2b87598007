#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "kohnbound/defining_function.hpp"
#include "kohnbound/errors.hpp"
#include "kohnbound/kohn.hpp"
#include "kohnbound/metric.hpp"
#include "kohnbound/surface.hpp"

using namespace kohnbound;
using namespace kohnbound::testing;

namespace {

ComplexPolynomial monomial(std::size_t m, ComplexPolynomial::Key key, cplx c) {
  ComplexPolynomial p(m);
  p.add_term(key, c);
  return p;
}

CVec sphere_point(std::mt19937_64& rng, std::size_t m, double nu) {
  CVec z = random_point(rng, m);
  double len = 0.0;
  for (const cplx& c : z) len += std::norm(c);
  const double scale = std::sqrt(nu / len);
  for (cplx& c : z) c *= scale;
  return z;
}

}  // namespace

TEST_CASE("trace formula on hand-computed examples") {
  auto rng = make_rng(301);
  SUBCASE("conjugate coordinates are eigenfunctions on any surface") {
    const DefiningFunction f = make_ellipsoid({0.3, 0.5, 0.0});
    for (int trial = 0; trial < 20; ++trial) {
      const CVec z = random_point(rng, 3);
      const MetricPoint mp = metric_at(f, z);
      const std::size_t n = 2;
      for (std::size_t j = 0; j < 3; ++j) {
        const TrialFunction u(monomial(3, {0, 0, 0, 0, 0, 0}, 1.0));
        ComplexPolynomial::Key key(6, 0);
        key[3 + j] = 1;  // zbar_j
        const TrialFunction cj(monomial(3, key, 1.0));
        const cplx box = kohn_apply_trace(mp, cj.jet(z));
        const cplx expect =
            double(n) / mp.grad_len_sq * std::conj(mp.grad_raised[j]);
        CHECK(std::abs(box - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
        CHECK(std::abs(kohn_apply_trace(mp, u.jet(z))) == 0.0);
      }
    }
  }
  SUBCASE("holomorphic functions are annihilated") {
    const DefiningFunction f = make_ellipsoid({0.5, 0.0});
    const TrialFunction u(monomial(2, {2, 1, 0, 0}, cplx(1.0, -0.5)));
    for (int trial = 0; trial < 20; ++trial) {
      const CVec z = random_point(rng, 2);
      CHECK(std::abs(kohn_apply_trace(metric_at(f, z), u.jet(z))) < 1e-14);
    }
  }
  SUBCASE("|z1|^2 on the unit sphere") {
    const DefiningFunction f = make_sphere(1);
    const TrialFunction u(monomial(2, {1, 0, 1, 0}, 1.0));
    for (int trial = 0; trial < 20; ++trial) {
      const CVec z = sphere_point(rng, 2, 1.0);
      const cplx box = kohn_apply_trace(metric_at(f, z), u.jet(z));
      CHECK(std::abs(box - cplx(2.0 * std::norm(z[0]) - 1.0, 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("fields formula equals the trace formula pointwise") {
  auto rng = make_rng(307);
  std::vector<DefiningFunction> surfaces;
  surfaces.push_back(make_sphere(2));
  surfaces.push_back(make_ellipsoid({0.5, 0.1, 0.0}));
  surfaces.push_back(DefiningFunction::fubini_study(ComplexPolynomial(3)));
  for (const DefiningFunction& f : surfaces) {
    const std::size_t m = f.ambient_dim();
    for (int trial = 0; trial < 34; ++trial) {
      const TrialFunction u(random_polynomial(rng, m, 3, false));
      const CVec z = random_point(rng, m, 0.9);
      const MetricPoint mp = metric_at(f, z);
      const AmbientJet jet = u.jet(z);
      const cplx a = kohn_apply_trace(mp, jet);
      const cplx b = kohn_apply_fields(mp, jet);
      CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("fields formula on the sphere eigenfunction") {
  const DefiningFunction f = make_sphere(1);
  const TrialFunction zbar1(monomial(2, {0, 0, 1, 0}, 1.0));
  auto rng = make_rng(311);
  for (int trial = 0; trial < 10; ++trial) {
    const CVec z = sphere_point(rng, 2, 1.0);
    const cplx box = kohn_apply_fields(metric_at(f, z), zbar1.jet(z));
    CHECK(std::abs(box - std::conj(z[0])) < 1e-13);
  }
  const TrialFunction one(monomial(2, {0, 0, 0, 0}, 1.0));
  const CVec p = {cplx(0.0, 1.0), cplx{}};
  CHECK(std::abs(kohn_apply_fields(metric_at(f, p), one.jet(p))) == 0.0);
}

TEST_CASE("tangential gradient pairing") {
  auto rng = make_rng(313);
  const DefiningFunction f = make_sphere(1);
  const TrialFunction zb1(monomial(2, {0, 0, 1, 0}, 1.0));
  const TrialFunction zb2(monomial(2, {0, 0, 0, 1}, 1.0));
  for (int trial = 0; trial < 20; ++trial) {
    const CVec z = sphere_point(rng, 2, 1.0);
    const MetricPoint mp = metric_at(f, z);
    const cplx p11 = dbar_b_pair(mp, zb1.jet(z), zb1.jet(z));
    CHECK(std::abs(p11 - cplx(1.0 - std::norm(z[0]), 0.0)) < 1e-13);
    // P(2,1) = -rho^2 rho^1bar / c = -z2 zbar1 on the unit sphere.
    const cplx p12 = dbar_b_pair(mp, zb1.jet(z), zb2.jet(z));
    CHECK(std::abs(p12 + z[1] * std::conj(z[0])) < 1e-13);
    CHECK(std::abs(std::abs(p12) - std::abs(z[0]) * std::abs(z[1])) < 1e-13);
  }

  const DefiningFunction g = make_ellipsoid({0.2, 0.6, 0.0});
  for (int trial = 0; trial < 20; ++trial) {
    const TrialFunction u(random_polynomial(rng, 3, 3, false));
    const TrialFunction v(random_polynomial(rng, 3, 3, false));
    const CVec z = random_point(rng, 3, 0.8);
    const MetricPoint mp = metric_at(g, z);
    const AmbientJet ju = u.jet(z), jv = v.jet(z);
    const cplx uv = dbar_b_pair(mp, ju, jv);
    const cplx vu = dbar_b_pair(mp, jv, ju);
    CHECK(std::abs(uv - std::conj(vu)) < 1e-12 * (1.0 + std::abs(uv)));
    const cplx uu = dbar_b_pair(mp, ju, ju);
    CHECK(uu.real() >= -1e-12 * (1.0 + std::abs(uu)));
    CHECK(std::abs(uu.imag()) < 1e-12 * (1.0 + std::abs(uu)));

    const TrialFunction hol(monomial(3, {1, 2, 0, 0, 0, 0}, cplx(0.3, 0.7)));
    CHECK(std::abs(dbar_b_pair(mp, hol.jet(z), jv)) < 1e-13);
  }
}

TEST_CASE("pairing matches the intrinsic frame computation for n = 1") {
  // Independent oracle: for one CR dimension, |dbar_b u|^2 =
  // |Z_betabar u|^2 / h_{beta betabar} with Z_betabar u = u_betabar -
  // (rho_betabar / rho_wbar) u_wbar in the chart where |rho_w| is largest.
  auto rng = make_rng(359);
  std::vector<DefiningFunction> surfaces;
  surfaces.push_back(make_ellipsoid({0.5, 0.0}));
  surfaces.push_back(make_ellipsoid({0.2, 0.7}));
  surfaces.push_back(DefiningFunction::fubini_study(ComplexPolynomial(2)));
  for (const DefiningFunction& f : surfaces) {
    for (int trial = 0; trial < 20; ++trial) {
      const TrialFunction u(random_polynomial(rng, 2, 3, false));
      const CVec z = random_point(rng, 2, 0.8);
      const MetricPoint mp = metric_at(f, z);
      const LeviData ld = levi_at(mp);
      const std::size_t w = ld.perm[1];
      const std::size_t beta = ld.perm[0];
      const AmbientJet ju = u.jet(z);
      const cplx zbu = ju.dzbar[beta] - std::conj(mp.jet.grad[beta]) /
                                            std::conj(mp.jet.grad[w]) *
                                            ju.dzbar[w];
      const double oracle = std::norm(zbu) / ld.levi(0, 0).real();
      const cplx code = dbar_b_pair(mp, ju, ju);
      CHECK(std::abs(code - cplx(oracle, 0.0)) < 1e-12 * (1.0 + oracle));
    }
  }
}

TEST_CASE("degenerate operator on gradient components") {
  SUBCASE("ellipsoids have flat Hessian, so Dt rho_m = 0") {
    auto rng = make_rng(317);
    const DefiningFunction f = make_ellipsoid({0.5, 0.2});
    for (int trial = 0; trial < 10; ++trial) {
      const MetricPoint mp = metric_at(f, random_point(rng, 2));
      for (std::size_t m = 0; m < 2; ++m)
        CHECK(std::abs(delta_tilde_grad(mp, m)) == 0.0);
    }
  }
  SUBCASE("pluriharmonic functions are annihilated") {
    auto rng = make_rng(331);
    const DefiningFunction f = make_ellipsoid({0.5, 0.2});
    ComplexPolynomial u = monomial(2, {2, 1, 0, 0}, cplx(1.0, 0.4));
    u += monomial(2, {0, 0, 1, 1}, cplx(0.2, -0.6));
    const TrialFunction tu(u);
    for (int trial = 0; trial < 10; ++trial) {
      const CVec z = random_point(rng, 2);
      CHECK(std::abs(delta_tilde_apply(metric_at(f, z), tu.jet(z))) < 1e-14);
    }
  }
  SUBCASE("logarithmic family vs finite differences") {
    const DefiningFunction f =
        DefiningFunction::fubini_study(ComplexPolynomial(2));
    auto rng = make_rng(337);
    for (int trial = 0; trial < 10; ++trial) {
      const CVec z = random_point(rng, 2);
      const MetricPoint mp = metric_at(f, z);
      for (std::size_t m = 0; m < 2; ++m) {
        // Oracle: contract the coefficient matrix with finite-difference
        // second derivatives of the gradient component rho_m.
        cplx acc{};
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t k = 0; k < 2; ++k) {
            const auto grad_m_j = [&](const CVec& w) {
              return wirtinger_fd(
                  [&](const CVec& v) { return f.gradient(v)[m]; }, w, j,
                  false);
            };
            const cplx second = wirtinger_fd(grad_m_j, z, k, true, 3e-4);
            const cplx coeff =
                mp.grad_raised[j] * std::conj(mp.grad_raised[k]) /
                    mp.grad_len_sq -
                mp.inv_metric(j, k);
            acc += coeff * second;
          }
        CHECK(std::abs(delta_tilde_grad(mp, m) - acc) < 1e-5);
      }
    }
  }
}

TEST_CASE("pointwise sign condition") {
  QuadratureSpec spec;
  spec.count = 2000;
  SUBCASE("sphere and ellipsoids satisfy it exactly") {
    for (const DefiningFunction& f :
         {make_sphere(1), make_ellipsoid({0.5, 0.0}),
          make_ellipsoid({0.3, 0.5, 0.1})}) {
      const SurfaceQuadrature quad = sample_surface(f, 1.0, spec);
      for (std::size_t j = 0; j < f.ambient_dim(); ++j) {
        const ConditionResult res = condition_special_check(f, quad, j);
        CHECK(res.satisfied);
        CHECK(res.max_lhs <= 1e-12);
      }
    }
  }
  SUBCASE("the logarithmic family violates it for every index") {
    const DefiningFunction f =
        DefiningFunction::fubini_study(ComplexPolynomial(3));
    const SurfaceQuadrature quad = sample_surface(f, 1.0, spec);
    for (std::size_t j = 0; j < 3; ++j) {
      const ConditionResult res = condition_special_check(f, quad, j);
      CHECK_FALSE(res.satisfied);
      CHECK(res.max_lhs > 0.1);
    }
  }
}

TEST_CASE("Levi data") {
  SUBCASE("unit sphere at (0,1)") {
    const DefiningFunction f = make_sphere(1);
    const LeviData ld = levi_at(f, {cplx{}, cplx(1.0, 0.0)});
    REQUIRE(ld.levi.rows() == 1);
    CHECK(std::abs(ld.levi(0, 0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(ld.levi_inv(0, 0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(ld.perm.back() == 1);
  }
  SUBCASE("inverse, positivity, and the Reeb field") {
    auto rng = make_rng(347);
    std::vector<DefiningFunction> surfaces;
    surfaces.push_back(make_ellipsoid({0.4, 0.1, 0.3}));
    surfaces.push_back(DefiningFunction::fubini_study(ComplexPolynomial(3)));
    for (const DefiningFunction& f : surfaces) {
      for (int trial = 0; trial < 20; ++trial) {
        const CVec z = random_point(rng, 3, 0.8);
        const MetricPoint mp = metric_at(f, z);
        if (std::abs(mp.grad_len_sq) < 1e-6) continue;
        const LeviData ld = levi_at(mp);
        const std::size_t n = 2;
        CHECK(max_abs_diff(ld.levi * ld.levi_inv, CMat::identity(n)) < 1e-9);
        CHECK(hermitian_defect(ld.levi) < 1e-12);
        // positive definite: eigenvalues of the 2x2 block
        const cplx tr = ld.levi.trace();
        const cplx det = ld.levi(0, 0) * ld.levi(1, 1) -
                         ld.levi(0, 1) * ld.levi(1, 0);
        CHECK(tr.real() > 0.0);
        CHECK(det.real() > 0.0);
        // theta(T) = 1 and T(rho) = 0
        CHECK(theta_pairing(mp.jet, ld.reeb) ==
              doctest::Approx(1.0).epsilon(1e-10));
        cplx drho{};
        for (std::size_t j = 0; j < 3; ++j)
          drho += mp.jet.grad[j] * ld.reeb[j];
        CHECK(std::abs(2.0 * drho.real()) < 1e-10);
      }
    }
  }
  SUBCASE("degenerate gradient is rejected") {
    const DefiningFunction f = make_sphere(1);
    try {
      levi_at(f, {cplx{}, cplx{}});
      FAIL("expected DegenerateGradient");
    } catch (const error& e) {
      CHECK(e.code() == errc::degenerate_gradient);
    }
  }
}

TEST_CASE("surface wrappers enforce the level-set constraint") {
  const DefiningFunction f = make_sphere(1);
  ComplexPolynomial u = monomial(2, {0, 0, 1, 0}, 1.0);
  const CVec on = {cplx(1.0, 0.0), cplx{}};
  CHECK_NOTHROW(kohn_apply_trace(f, u, on, 1.0));
  try {
    kohn_apply_trace(f, u, on, 2.0);
    FAIL("expected NotOnSurface");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_on_surface);
  }
}

TEST_CASE("integration by parts and Hermiticity over the surface") {
  auto rng = make_rng(353);
  const DefiningFunction f = make_ellipsoid({0.5, 0.0});
  QuadratureSpec spec;
  spec.count = 40000;
  spec.seed = 5;
  const SurfaceQuadrature quad = sample_surface(f, 1.0, spec);
  const TrialFunction u(random_polynomial(rng, 2, 3, false));
  const TrialFunction v(random_polynomial(rng, 2, 3, false));
  const auto box_pair = [&](const TrialFunction& a, const TrialFunction& b,
                            const SurfaceSample& s) {
    const MetricPoint mp = metric_at(f, s.point);
    return kohn_apply_trace(mp, a.jet(s.point)) *
           std::conj(b.jet(s.point).value);
  };
  // int (Box u) conj(v) - int <du, dv>_b = 0
  const ComplexIntegral ibp = integrate_complex(quad, [&](const SurfaceSample& s) {
    const MetricPoint mp = metric_at(f, s.point);
    return box_pair(u, v, s) -
           dbar_b_pair(mp, u.jet(s.point), v.jet(s.point));
  });
  CHECK(std::abs(ibp.value) <= 3.0 * ibp.se + 1e-10);
  // int (Box u) conj(v) - conj(int (Box v) conj(u)) = 0
  const ComplexIntegral herm =
      integrate_complex(quad, [&](const SurfaceSample& s) {
        return box_pair(u, v, s) - std::conj(box_pair(v, u, s));
      });
  CHECK(std::abs(herm.value) <= 3.0 * herm.se + 1e-10);
}
