#include "kohnbound/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>

#include "kohnbound/errors.hpp"

namespace kohnbound {

void ComplexPolynomial::add_term(const std::vector<unsigned>& a,
                                 const std::vector<unsigned>& b, cplx c) {
  if (a.size() != n_vars_ || b.size() != n_vars_)
    fail(errc::config_error, "exponent vector length mismatch");
  Key key(a);
  key.insert(key.end(), b.begin(), b.end());
  add_term(key, c);
}

void ComplexPolynomial::add_term(const Key& key, cplx c) {
  if (key.size() != 2 * n_vars_)
    fail(errc::config_error, "exponent key length mismatch");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (c != cplx{}) terms_.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second == cplx{}) terms_.erase(it);
}

namespace {

cplx int_pow(cplx z, unsigned e) {
  cplx r = 1.0;
  while (e != 0) {
    if (e & 1u) r *= z;
    z *= z;
    e >>= 1u;
  }
  return r;
}

}  // namespace

cplx ComplexPolynomial::eval(const CVec& z) const {
  if (z.size() != n_vars_) fail(errc::config_error, "point dimension mismatch");
  cplx sum{};
  for (const auto& [key, c] : terms_) {
    cplx t = c;
    for (std::size_t j = 0; j < n_vars_; ++j) {
      if (key[j] != 0) t *= int_pow(z[j], key[j]);
      if (key[n_vars_ + j] != 0) t *= int_pow(std::conj(z[j]), key[n_vars_ + j]);
    }
    sum += t;
  }
  return sum;
}

ComplexPolynomial ComplexPolynomial::derivative(std::size_t var,
                                                bool conjugated) const {
  if (var >= n_vars_) fail(errc::config_error, "derivative variable out of range");
  const std::size_t slot = conjugated ? n_vars_ + var : var;
  ComplexPolynomial d(n_vars_);
  for (const auto& [key, c] : terms_) {
    const unsigned e = key[slot];
    if (e == 0) continue;
    Key k = key;
    k[slot] = e - 1;
    d.add_term(k, c * static_cast<double>(e));
  }
  return d;
}

ComplexPolynomial ComplexPolynomial::conjugated() const {
  ComplexPolynomial c(n_vars_);
  for (const auto& [key, coeff] : terms_) {
    Key k(key.begin() + static_cast<std::ptrdiff_t>(n_vars_), key.end());
    k.insert(k.end(), key.begin(), key.begin() + static_cast<std::ptrdiff_t>(n_vars_));
    c.add_term(k, std::conj(coeff));
  }
  return c;
}

ComplexPolynomial& ComplexPolynomial::operator+=(const ComplexPolynomial& rhs) {
  if (rhs.n_vars_ != n_vars_) fail(errc::config_error, "variable count mismatch");
  for (const auto& [key, c] : rhs.terms_) add_term(key, c);
  return *this;
}

ComplexPolynomial& ComplexPolynomial::operator*=(cplx scale) {
  if (scale == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= scale;
  return *this;
}

bool ComplexPolynomial::is_real_valued() const {
  for (const auto& [key, c] : terms_) {
    Key swapped(key.begin() + static_cast<std::ptrdiff_t>(n_vars_), key.end());
    swapped.insert(swapped.end(), key.begin(),
                   key.begin() + static_cast<std::ptrdiff_t>(n_vars_));
    auto it = terms_.find(swapped);
    if (it == terms_.end() || it->second != std::conj(c)) return false;
  }
  return true;
}

bool ComplexPolynomial::is_holomorphic() const {
  for (const auto& [key, c] : terms_) {
    (void)c;
    for (std::size_t j = n_vars_; j < 2 * n_vars_; ++j)
      if (key[j] != 0) return false;
  }
  return true;
}

unsigned ComplexPolynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& [key, c] : terms_) {
    (void)c;
    d = std::max(d, std::accumulate(key.begin(), key.end(), 0u));
  }
  return d;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void err(const std::string& msg) const {
    fail(errc::parse_error,
         msg + " at position " + std::to_string(pos) + " in \"" + text + "\"");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos;
    return true;
  }

  double parse_real() {
    skip_ws();
    char* end = nullptr;
    const double v = std::strtod(text.c_str() + pos, &end);
    if (end == text.c_str() + pos) err("expected a number");
    pos = static_cast<std::size_t>(end - text.c_str());
    return v;
  }

  unsigned parse_uint() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      err("expected an integer");
    unsigned v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<unsigned>(text[pos] - '0');
      ++pos;
    }
    return v;
  }

  struct Term {
    cplx coeff = 1.0;
    // (variable index, conjugated, exponent)
    std::vector<std::tuple<unsigned, bool, unsigned>> factors;
  };

  Term parse_term() {
    Term t;
    bool first = true;
    for (;;) {
      skip_ws();
      if (pos >= text.size()) {
        if (first) err("expected a term");
        break;
      }
      const char c = text[pos];
      if (c == 'z' || c == 'c') {
        const bool conj = (c == 'c');
        ++pos;
        const unsigned idx = parse_uint();
        if (idx == 0) err("variable indices start at 1");
        unsigned e = 1;
        if (accept('^')) e = parse_uint();
        t.factors.emplace_back(idx - 1, conj, e);
      } else if (c == 'i' &&
                 (pos + 1 >= text.size() ||
                  !std::isalnum(static_cast<unsigned char>(text[pos + 1])))) {
        ++pos;
        t.coeff *= cplx(0.0, 1.0);
      } else if (c == '(') {
        ++pos;
        const double re = parse_real();
        if (!accept(',')) err("expected ',' in complex literal");
        const double im = parse_real();
        if (!accept(')')) err("expected ')' in complex literal");
        t.coeff *= cplx(re, im);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.coeff *= parse_real();
      } else {
        if (first) err("expected a factor");
        break;
      }
      first = false;
      skip_ws();
      if (!accept('*')) break;
    }
    return t;
  }
};

}  // namespace

ComplexPolynomial parse_polynomial(const std::string& text, std::size_t n_vars) {
  Parser p{text};
  std::vector<std::pair<Parser::Term, double>> terms;  // term, sign
  double sign = 1.0;
  p.skip_ws();
  if (p.accept('-')) sign = -1.0;
  else p.accept('+');
  unsigned max_index = 0;
  for (;;) {
    Parser::Term t = p.parse_term();
    for (const auto& [idx, conj, e] : t.factors) {
      (void)conj;
      (void)e;
      max_index = std::max(max_index, idx + 1);
    }
    terms.emplace_back(std::move(t), sign);
    p.skip_ws();
    if (p.pos >= p.text.size()) break;
    if (p.accept('+')) sign = 1.0;
    else if (p.accept('-')) sign = -1.0;
    else p.err("expected '+' or '-' between terms");
  }
  if (n_vars == 0) n_vars = std::max(1u, max_index);
  if (max_index > n_vars)
    fail(errc::parse_error, "variable index exceeds declared variable count");

  ComplexPolynomial poly(n_vars);
  for (const auto& [t, s] : terms) {
    std::vector<unsigned> a(n_vars, 0), b(n_vars, 0);
    for (const auto& [idx, conj, e] : t.factors) {
      if (conj) b[idx] += e;
      else a[idx] += e;
    }
    poly.add_term(a, b, s * t.coeff);
  }
  return poly;
}

}  // namespace kohnbound
