#pragma once

#include <memory>
#include <optional>

#include "kohnbound/polynomial.hpp"
#include "kohnbound/types.hpp"

namespace kohnbound {

/// Value and Wirtinger derivatives of a real-valued function up to total
/// order 3 at a point. The complex Hessian is stored as hessian(j,k) =
/// rho_{j kbar}; third(j,p,q) = rho_{j p qbar} with the two holomorphic
/// indices symmetric. Derivatives with two antiholomorphic indices follow
/// from reality: rho_{j pbar qbar} = conj(rho_{p q jbar}).
struct Jet3 {
  std::size_t dim = 0;
  double value = 0.0;
  CVec grad;      // rho_j
  CMat hessian;   // rho_{j kbar}, Hermitian
  CVec third;     // rho_{j p qbar}, flattened (j*dim + p)*dim + q

  CVec grad_bar() const {
    CVec g(grad.size());
    for (std::size_t j = 0; j < grad.size(); ++j) g[j] = std::conj(grad[j]);
    return g;
  }

  cplx third_mixed(std::size_t j, std::size_t p, std::size_t q) const {
    return third[(j * dim + p) * dim + q];
  }
  cplx third_mixed_bar(std::size_t j, std::size_t p, std::size_t q) const {
    return std::conj(third_mixed(p, q, j));
  }
};

/// A strictly plurisubharmonic defining function: either a real-valued
/// polynomial in z and zbar, or the logarithmic family
/// rho(Z) = log(1 + ||Z||^2) + 2 Re hol(Z) with hol holomorphic.
/// Jet evaluation is exact: formal differentiation for polynomials,
/// closed forms for the logarithmic part. Immutable after construction.
class DefiningFunction {
 public:
  enum class Kind { polynomial, fubini_study };

  static DefiningFunction from_polynomial(ComplexPolynomial rho);
  static DefiningFunction fubini_study(ComplexPolynomial hol);

  Kind kind() const { return kind_; }
  std::size_t ambient_dim() const { return dim_; }
  std::size_t cr_dim() const { return dim_ - 1; }

  double value(const CVec& z) const;
  CVec gradient(const CVec& z) const;
  Jet3 jet(const CVec& z) const;

  /// The stored polynomial rho (polynomial kind) or the holomorphic part
  /// (fubini_study kind).
  const ComplexPolynomial& base_polynomial() const { return base_; }

 private:
  DefiningFunction(Kind kind, ComplexPolynomial base);

  Kind kind_;
  std::size_t dim_;
  ComplexPolynomial base_;
  // Cached formal derivatives (shared across copies; evaluation is pure).
  struct Cache;
  std::shared_ptr<const Cache> cache_;
};

inline Jet3 eval_jet3(const DefiningFunction& f, const CVec& z) {
  return f.jet(z);
}

/// rho(Z) = ||Z||^2 + Re sum_j A_j z_j^2 with 0 <= A_j < 1; the complex
/// Hessian is identically the identity and the level sets are compact.
DefiningFunction make_ellipsoid(const RVec& a);

/// rho(Z) = ||Z||^2 in complex dimension n+1 (CR dimension n).
DefiningFunction make_sphere(std::size_t n);

}  // namespace kohnbound
