#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kohnbound/types.hpp"

namespace kohnbound {

/// A polynomial in z_1..z_m and their conjugates: sum of terms
/// c * z^a * zbar^b. Exponents are stored as a single vector of length 2m,
/// holomorphic exponents first. Coefficients are double-precision complex;
/// differentiation is exact (formal).
class ComplexPolynomial {
 public:
  using Key = std::vector<unsigned>;

  explicit ComplexPolynomial(std::size_t n_vars) : n_vars_(n_vars) {}

  std::size_t n_vars() const { return n_vars_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Key, cplx>& terms() const { return terms_; }

  /// Adds c * z^a * zbar^b, merging with an existing term. Terms whose
  /// coefficient cancels to exactly zero are removed.
  void add_term(const std::vector<unsigned>& a, const std::vector<unsigned>& b,
                cplx c);
  void add_term(const Key& key, cplx c);

  cplx eval(const CVec& z) const;

  /// Formal Wirtinger derivative d/dz_var (or d/dzbar_var).
  ComplexPolynomial derivative(std::size_t var, bool conjugated) const;

  /// Polynomial with every z <-> zbar swapped and coefficients conjugated;
  /// represents the complex conjugate function.
  ComplexPolynomial conjugated() const;

  ComplexPolynomial& operator+=(const ComplexPolynomial& rhs);
  ComplexPolynomial& operator*=(cplx scale);

  /// True iff coeff(a,b) == conj(coeff(b,a)) for every term, by exact
  /// equality of the stored coefficients.
  bool is_real_valued() const;

  /// True iff no term carries a conjugated variable.
  bool is_holomorphic() const;

  unsigned total_degree() const;

 private:
  std::size_t n_vars_;
  std::map<Key, cplx> terms_;
};

inline ComplexPolynomial wirtinger_derive(const ComplexPolynomial& p,
                                          std::size_t var, bool conjugated) {
  return p.derivative(var, conjugated);
}

inline bool reality_check(const ComplexPolynomial& p) {
  return p.is_real_valued();
}

/// Parses the CLI text format: a sum of terms, each a '*'-separated product
/// of factors. Factors are real literals, complex literals "(re,im)", "i",
/// or variables "zJ" / "cJ" ("cJ" is the conjugate of zJ) with an optional
/// "^exp". Example: "0.5*z1^2 + 0.5*c1^2 + (0,1)*z2".
/// When n_vars == 0 the variable count is inferred from the largest index.
ComplexPolynomial parse_polynomial(const std::string& text,
                                   std::size_t n_vars = 0);

}  // namespace kohnbound
