#include "kohnbound/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kohnbound/errors.hpp"
#include "kohnbound/parallel.hpp"

namespace kohnbound {

CVec complex_of_real(const RVec& v) {
  CVec w(v.size() / 2);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = cplx(v[2 * j], v[2 * j + 1]);
  return w;
}

RVec real_of_complex(const CVec& w) {
  RVec v(2 * w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    v[2 * j] = w[j].real();
    v[2 * j + 1] = w[j].imag();
  }
  return v;
}

RVec real_gradient(const CVec& g) {
  RVec v(2 * g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    v[2 * j] = 2.0 * g[j].real();
    v[2 * j + 1] = -2.0 * g[j].imag();
  }
  return v;
}

double sphere_area(std::size_t m) {
  // sigma(S^{2m-1}) = 2 pi^m / (m-1)!
  double fact = 1.0;
  for (std::size_t k = 2; k < m; ++k) fact *= static_cast<double>(k);
  return 2.0 * std::pow(std::numbers::pi, static_cast<double>(m)) / fact;
}

namespace {

double dot(const RVec& a, const RVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const RVec& a) { return std::sqrt(dot(a, a)); }

CVec point_along(const CVec& center, const CVec& dir_c, double t) {
  CVec p(center.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = center[j] + t * dir_c[j];
  return p;
}

double radial_derivative(const DefiningFunction& f, const CVec& p,
                         const CVec& dir_c) {
  const CVec g = f.gradient(p);
  cplx acc{};
  for (std::size_t j = 0; j < g.size(); ++j) acc += g[j] * dir_c[j];
  return 2.0 * acc.real();
}

// Pfaffian of a small antisymmetric matrix given as a dense 2k x 2k block,
// by recursive expansion along the first row.
double pfaffian(const std::vector<RVec>& d, std::vector<std::size_t> idx) {
  const std::size_t k = idx.size();
  if (k == 0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (std::size_t j = 1; j < k; ++j) {
    std::vector<std::size_t> rest;
    rest.reserve(k - 2);
    for (std::size_t l = 1; l < k; ++l)
      if (l != j) rest.push_back(idx[l]);
    sum += sign * d[idx[0]][idx[j]] * pfaffian(d, std::move(rest));
    sign = -sign;
  }
  return sum;
}

struct SolveResult {
  double t;
  CVec point;
};

SolveResult radial_solve_impl(const DefiningFunction& f, double nu,
                              const CVec& dir_c, const CVec& center) {
  const double tol = 1e-12 * std::max(1.0, std::abs(nu));
  const double at_center = f.value(center);
  if (at_center >= nu)
    fail(errc::config_error, "rho(center) must lie below the level nu");

  double lo = 0.0, flo = at_center - nu;
  double hi = 1.0;
  double fhi = f.value(point_along(center, dir_c, hi)) - nu;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    if (hi > 1e8)
      fail(errc::no_root, "rho stays below nu along the probed ray");
    fhi = f.value(point_along(center, dir_c, hi)) - nu;
  }
  (void)flo;

  double t = 0.5 * (lo + hi);
  CVec p = point_along(center, dir_c, t);
  double val = f.value(p) - nu;
  for (int iter = 0; iter < 60 && std::abs(val) > tol; ++iter) {
    if (val < 0.0) lo = t;
    else hi = t;
    const double d = radial_derivative(f, p, dir_c);
    double next = (d > 0.0) ? t - val / d : -1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
    p = point_along(center, dir_c, t);
    val = f.value(p) - nu;
  }
  if (std::abs(val) > tol)
    fail(errc::not_star_shaped, "radial solve failed to converge");
  if (radial_derivative(f, p, dir_c) <= 0.0)
    fail(errc::not_star_shaped,
         "level set crossed with non-positive radial derivative");
  return {t, std::move(p)};
}

// Orthonormal tangent basis of the parameter sphere at a unit direction xi,
// oriented so that (xi, basis) is positively oriented in R^{2m}.
std::vector<RVec> sphere_tangent_basis(const RVec& xi) {
  const std::size_t d = xi.size();
  std::vector<RVec> basis(d - 1, RVec(d, 0.0));
  RVec v = xi;
  v[0] -= 1.0;
  const double vv = dot(v, v);
  if (vv < 1e-24) {
    for (std::size_t a = 0; a + 1 < d; ++a) basis[a][a + 1] = 1.0;
  } else {
    // Columns 2..d of the Householder reflection mapping e1 to xi; the
    // reflection has determinant -1, so flip one vector to orient.
    for (std::size_t a = 0; a + 1 < d; ++a) {
      const double coeff = 2.0 * v[a + 1] / vv;
      for (std::size_t i = 0; i < d; ++i) basis[a][i] = -coeff * v[i];
      basis[a][a + 1] += 1.0;
    }
    for (double& x : basis[0]) x = -x;
  }
  return basis;
}

// splitmix64, used to derive independent per-chunk streams.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a08c2b2f7f9dULL;
  return z ^ (z >> 31);
}

struct ChunkRng {
  std::uint64_t state;
  explicit ChunkRng(std::uint64_t seed, std::uint64_t chunk) {
    state = seed ^ (0x2545f4914f6cdd1dULL * (chunk + 1));
    for (int i = 0; i < 4; ++i) splitmix64(state);
  }
  double uniform() {  // in (0, 1]
    const std::uint64_t bits = splitmix64(state);
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
  }
  // Box-Muller pair of standard normals.
  void normal_pair(double& a, double& b) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    a = r * std::cos(phi);
    b = r * std::sin(phi);
  }
};

SurfaceSample make_sample(const DefiningFunction& f, double nu, const RVec& dir,
                          const CVec& center, double param_weight) {
  const std::size_t m = f.ambient_dim();
  const CVec dir_c = complex_of_real(dir);
  const SolveResult sol = radial_solve_impl(f, nu, dir_c, center);

  const Jet3 jet = f.jet(sol.point);
  const RVec grad_r = real_gradient(jet.grad);
  const double denom = dot(grad_r, dir);
  if (denom <= 0.0)
    fail(errc::not_star_shaped,
         "outward radial derivative non-positive on the surface");

  const std::vector<RVec> basis = sphere_tangent_basis(dir);
  std::vector<RVec> frame(2 * m - 1, RVec(2 * m, 0.0));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const double coeff = sol.t * dot(grad_r, basis[a]) / denom;
    for (std::size_t i = 0; i < 2 * m; ++i)
      frame[a][i] = sol.t * basis[a][i] - coeff * dir[i];
  }

  const double density = contact_density(jet, frame, /*check_tangency=*/true);
  if (density <= 0.0)
    fail(errc::orientation_flip,
         "contact density changed sign on the surface");

  SurfaceSample sample;
  sample.point = sol.point;
  sample.weight = param_weight * density;
  sample.direction = dir;
  sample.t = sol.t;
  return sample;
}

}  // namespace

double radial_solve(const DefiningFunction& f, double nu, const RVec& dir,
                    const CVec& center) {
  if (dir.size() != 2 * f.ambient_dim())
    fail(errc::config_error, "direction dimension mismatch");
  return radial_solve_impl(f, nu, complex_of_real(dir), center).t;
}

double contact_density(const Jet3& jet, const std::vector<RVec>& frame,
                       bool check_tangency) {
  const std::size_t m = jet.dim;
  const std::size_t k = 2 * m - 1;
  if (frame.size() != k)
    fail(errc::config_error, "frame must have 2n+1 vectors");
  std::vector<CVec> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = complex_of_real(frame[i]);

  if (check_tangency) {
    double grad_scale = 0.0;
    for (const cplx& g : jet.grad) grad_scale += std::norm(g);
    grad_scale = 2.0 * std::sqrt(grad_scale);
    for (std::size_t i = 0; i < k; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < m; ++j) acc += jet.grad[j] * w[i][j];
      const double defect = std::abs(2.0 * acc.real());
      double len = 0.0;
      for (const cplx& c : w[i]) len += std::norm(c);
      len = std::sqrt(len);
      if (defect > 1e-8 * std::max(1e-300, grad_scale * len))
        fail(errc::frame_not_tangent, "frame vector does not annihilate d rho");
    }
  }

  RVec theta(k);
  for (std::size_t i = 0; i < k; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m; ++j) acc += jet.grad[j] * w[i][j];
    theta[i] = acc.imag();
  }

  std::vector<RVec> dtheta(k, RVec(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = i + 1; l < k; ++l) {
      cplx acc{};
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          acc += w[i][a] * jet.hessian(a, b) * std::conj(w[l][b]);
      const double val = -2.0 * acc.imag();
      dtheta[i][l] = val;
      dtheta[l][i] = -val;
    }

  double nfact = 1.0;
  for (std::size_t j = 2; j < m; ++j) nfact *= static_cast<double>(j);

  double density = 0.0;
  double sign = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (theta[i] != 0.0) {
      std::vector<std::size_t> rest;
      rest.reserve(k - 1);
      for (std::size_t l = 0; l < k; ++l)
        if (l != i) rest.push_back(l);
      density += sign * theta[i] * nfact * pfaffian(dtheta, std::move(rest));
    }
    sign = -sign;
  }
  return density;
}

double contact_density(const DefiningFunction& f, const CVec& p,
                       const std::vector<RVec>& frame) {
  return contact_density(f.jet(p), frame, /*check_tangency=*/true);
}

SurfaceQuadrature sample_surface(const DefiningFunction& f, double nu,
                                 const QuadratureSpec& spec) {
  const std::size_t m = f.ambient_dim();
  if (spec.count == 0)
    fail(errc::empty_quadrature, "sample count must be at least 1");
  CVec center = spec.center.empty() ? CVec(m, cplx{}) : spec.center;
  if (center.size() != m) fail(errc::config_error, "center dimension mismatch");

  SurfaceQuadrature quad;
  quad.method = spec.method;
  quad.nu = nu;
  quad.center = center;

  if (spec.method == QuadMethod::monte_carlo) {
    const double param_weight =
        sphere_area(m) / static_cast<double>(spec.count);
    quad.samples.resize(spec.count);
    parallel_chunks(spec.count, kDefaultChunk,
                    [&](std::size_t ci, std::size_t begin, std::size_t end) {
                      ChunkRng rng(spec.seed, ci);
                      RVec dir(2 * m);
                      for (std::size_t i = begin; i < end; ++i) {
                        double len = 0.0;
                        do {
                          for (std::size_t j = 0; j < m; ++j)
                            rng.normal_pair(dir[2 * j], dir[2 * j + 1]);
                          len = norm(dir);
                        } while (len < 1e-100);
                        for (double& x : dir) x /= len;
                        quad.samples[i] = make_sample(f, nu, dir, center,
                                                      param_weight);
                      }
                    });
  } else {
    if (f.cr_dim() != 1)
      fail(errc::config_error, "product grid quadrature is only defined for n = 1");
    // Hyperspherical midpoint grid on S^3:
    // xi = (cos t1, sin t1 cos t2, sin t1 sin t2 cos t3, sin t1 sin t2 sin t3),
    // d sigma = sin^2 t1 sin t2 dt1 dt2 dt3.
    std::size_t k1 = static_cast<std::size_t>(
        std::floor(std::cbrt(static_cast<double>(spec.count) / 2.0)));
    k1 = std::max<std::size_t>(1, k1);
    const std::size_t k2 = k1, k3 = 2 * k1;
    const double pi = std::numbers::pi;
    const double cell = (pi / k1) * (pi / k2) * (2.0 * pi / k3);
    quad.samples.resize(k1 * k2 * k3);
    parallel_chunks(
        quad.samples.size(), kDefaultChunk,
        [&](std::size_t, std::size_t begin, std::size_t end) {
          for (std::size_t i = begin; i < end; ++i) {
            const std::size_t i1 = i / (k2 * k3);
            const std::size_t i2 = (i / k3) % k2;
            const std::size_t i3 = i % k3;
            const double t1 = pi * (i1 + 0.5) / k1;
            const double t2 = pi * (i2 + 0.5) / k2;
            const double t3 = 2.0 * pi * (i3 + 0.5) / k3;
            RVec dir = {std::cos(t1), std::sin(t1) * std::cos(t2),
                        std::sin(t1) * std::sin(t2) * std::cos(t3),
                        std::sin(t1) * std::sin(t2) * std::sin(t3)};
            const double jac =
                std::sin(t1) * std::sin(t1) * std::sin(t2) * cell;
            quad.samples[i] = make_sample(f, nu, dir, center, jac);
          }
        });
  }
  return quad;
}

namespace {

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
};

}  // namespace

Integral integrate(const SurfaceQuadrature& quad,
                   const std::function<double(const SurfaceSample&)>& g) {
  const std::size_t n = quad.samples.size();
  if (n == 0) fail(errc::empty_quadrature, "cannot integrate over zero samples");
  std::vector<Moments> partial(chunk_count(n, kDefaultChunk));
  parallel_chunks(n, kDefaultChunk,
                  [&](std::size_t ci, std::size_t begin, std::size_t end) {
                    Moments mo;
                    for (std::size_t i = begin; i < end; ++i) {
                      const double y =
                          quad.samples[i].weight * g(quad.samples[i]);
                      mo.sum += y;
                      mo.sumsq += y * y;
                    }
                    partial[ci] = mo;
                  });
  Moments total;
  for (const Moments& mo : partial) {
    total.sum += mo.sum;
    total.sumsq += mo.sumsq;
  }
  Integral out;
  out.value = total.sum;
  if (quad.method == QuadMethod::monte_carlo && n > 1) {
    const double nn = static_cast<double>(n);
    const double var = (nn * total.sumsq - total.sum * total.sum) / (nn - 1.0);
    out.se = std::sqrt(std::max(0.0, var));
  }
  return out;
}

ComplexIntegral integrate_complex(
    const SurfaceQuadrature& quad,
    const std::function<cplx(const SurfaceSample&)>& g) {
  const Integral re = integrate(
      quad, [&](const SurfaceSample& s) { return g(s).real(); });
  const Integral im = integrate(
      quad, [&](const SurfaceSample& s) { return g(s).imag(); });
  return {cplx(re.value, im.value), std::hypot(re.se, im.se)};
}

}  // namespace kohnbound
