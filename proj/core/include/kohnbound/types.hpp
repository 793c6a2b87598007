#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace kohnbound {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// Small dense complex matrix, row-major. Everything in this library is
// (n+1)x(n+1) with n+1 <= ~8, so no effort is spent on blocking.
class CMat {
 public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMat identity(std::size_t m) {
    CMat I(m, m);
    for (std::size_t i = 0; i < m; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  CMat transpose() const {
    CMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  CMat conjugate() const {
    CMat c(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) c(i, j) = std::conj((*this)(i, j));
    return c;
  }

  CMat adjoint() const { return transpose().conjugate(); }

  CMat operator*(const CMat& rhs) const {
    assert(cols_ == rhs.rows_);
    CMat p(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const cplx aik = (*this)(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += aik * rhs(k, j);
      }
    return p;
  }

  CVec operator*(const CVec& v) const {
    assert(cols_ == v.size());
    CVec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      cplx acc{};
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
      r[i] = acc;
    }
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> a_;
};

inline double max_abs_diff(const CMat& a, const CMat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double hermitian_defect(const CMat& h) {
  double m = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
  return m;
}

}  // namespace kohnbound
