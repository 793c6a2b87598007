#pragma once

#include <cmath>
#include <random>

#include "kohnbound/defining_function.hpp"
#include "kohnbound/polynomial.hpp"
#include "kohnbound/types.hpp"

namespace kohnbound::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  return cplx(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

inline CVec random_point(std::mt19937_64& rng, std::size_t m,
                         double scale = 1.0) {
  CVec z(m);
  for (cplx& c : z) c = random_cplx(rng, scale);
  return z;
}

inline CMat random_hermitian(std::mt19937_64& rng, std::size_t m,
                             double diag_shift = 0.0) {
  CMat h(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    h(i, i) = uniform(rng, -1.0, 1.0) + diag_shift;
    for (std::size_t j = i + 1; j < m; ++j) {
      h(i, j) = random_cplx(rng);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

inline CMat random_symmetric(std::mt19937_64& rng, std::size_t m) {
  CMat q(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      q(i, j) = random_cplx(rng);
      q(j, i) = q(i, j);
    }
  return q;
}

inline ComplexPolynomial random_polynomial(std::mt19937_64& rng,
                                           std::size_t m, unsigned max_degree,
                                           bool real_valued) {
  ComplexPolynomial p(m);
  std::uniform_int_distribution<unsigned> exp_dist(0, max_degree);
  const std::size_t terms = 4 + rng() % 4;
  for (std::size_t t = 0; t < terms; ++t) {
    ComplexPolynomial::Key key(2 * m, 0);
    for (;;) {
      unsigned total = 0;
      for (unsigned& e : key) {
        e = exp_dist(rng);
        total += e;
      }
      if (total >= 1 && total <= max_degree) break;
    }
    p.add_term(key, random_cplx(rng));
  }
  if (real_valued) p += p.conjugated();
  return p;
}

// Central-difference Wirtinger derivative of a complex-valued function
// of one complex coordinate: d/dz = (d/dx - i d/dy)/2.
template <class F>
cplx wirtinger_fd(const F& f, const CVec& z, std::size_t var, bool conjugated,
                  double h = 1e-5) {
  CVec zp = z, zm = z;
  zp[var] += h;
  zm[var] -= h;
  const cplx dx = (f(zp) - f(zm)) / (2.0 * h);
  zp = z;
  zm = z;
  zp[var] += cplx(0.0, h);
  zm[var] -= cplx(0.0, h);
  const cplx dy = (f(zp) - f(zm)) / (2.0 * h);
  return conjugated ? 0.5 * (dx + cplx(0.0, 1.0) * dy)
                    : 0.5 * (dx - cplx(0.0, 1.0) * dy);
}

}  // namespace kohnbound::testing
