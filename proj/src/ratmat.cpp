#include "wpg/ratmat.hpp"

#include <stdexcept>

namespace wpg {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool RatMat::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

RatMat RatMat::operator+(const RatMat& o) const {
  RatMat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

RatMat RatMat::operator-(const RatMat& o) const {
  RatMat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

RatMat RatMat::operator*(const RatMat& o) const {
  RatMat m(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      if (at(i, k) == 0) continue;
      for (int j = 0; j < o.c_; ++j) m.at(i, j) += at(i, k) * o.at(k, j);
    }
  return m;
}

RatMat RatMat::scaled(const BigRat& s) const {
  RatMat m(r_, c_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * s;
  return m;
}

RatMat RatMat::transpose() const {
  RatMat m(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
  return m;
}

RatMat RatMat::pow(unsigned long e) const {
  RatMat acc = identity(r_);
  RatMat base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

BigRat RatMat::det() const {
  RatMat m = *this;
  int n = r_;
  BigRat d = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (m.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return BigRat(0);
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(col, j));
      d = -d;
    }
    d *= m.at(col, col);
    for (int i = col + 1; i < n; ++i) {
      if (m.at(i, col) == 0) continue;
      BigRat f = m.at(i, col) / m.at(col, col);
      for (int j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return d;
}

RatMat RatMat::inverse() const {
  int n = r_;
  RatMat m = *this;
  RatMat inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (m.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::domain_error("singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m.at(piv, j), m.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    BigRat p = m.at(col, col);
    for (int j = 0; j < n; ++j) {
      m.at(col, j) /= p;
      inv.at(col, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || m.at(i, col) == 0) continue;
      BigRat f = m.at(i, col);
      for (int j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(col, j);
        inv.at(i, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

BigRat RatMat::trace() const {
  BigRat t = 0;
  for (int i = 0; i < r_; ++i) t += at(i, i);
  return t;
}

unsigned RatMat::height_bits() const {
  unsigned h = 0;
  for (const auto& q : a_) {
    h = std::max<unsigned>(h, msb(abs(numerator(q)) + 1));
    h = std::max<unsigned>(h, msb(denominator(q)));
  }
  return h;
}

std::vector<GaussRat> RatMat::apply(const std::vector<GaussRat>& v) const {
  std::vector<GaussRat> out(r_);
  for (int i = 0; i < r_; ++i) {
    GaussRat acc;
    for (int j = 0; j < c_; ++j)
      if (at(i, j) != 0) acc += GaussRat(at(i, j)) * v[j];
    out[i] = acc;
  }
  return out;
}

RatPoly poly_trim(RatPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

RatPoly poly_mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(r);
}

RatPoly poly_derivative(const RatPoly& p) {
  RatPoly r;
  for (size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * BigRat(static_cast<long>(i)));
  return poly_trim(r);
}

RatPoly poly_mod(const RatPoly& a0, const RatPoly& b0) {
  RatPoly a = poly_trim(a0), b = poly_trim(b0);
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  while (a.size() >= b.size() && !a.empty()) {
    BigRat f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = poly_trim(a);
  }
  return a;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!b.empty()) {
    RatPoly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    BigRat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

RatPoly poly_div_exact(const RatPoly& a0, const RatPoly& b0) {
  RatPoly a = poly_trim(a0), b = poly_trim(b0);
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  if (a.size() < b.size()) return {};
  RatPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    BigRat f = a.back() / b.back();
    size_t off = a.size() - b.size();
    q[off] = f;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    a = poly_trim(a);
  }
  if (!a.empty()) throw std::domain_error("inexact polynomial division");
  return poly_trim(q);
}

RatMat poly_eval(const RatPoly& p, const RatMat& x) {
  int n = x.rows();
  RatMat acc = RatMat::zero(n);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * x;
    for (int i = 0; i < n; ++i) acc.at(i, i) += *it;
  }
  return acc;
}

RatPoly charpoly(const RatMat& a) {
  int n = a.rows();
  RatPoly c(n + 1);
  c[n] = 1;
  RatMat m = RatMat::zero(n);
  BigRat ck = 1;
  for (int k = 1; k <= n; ++k) {
    // M_k = A*M_{k-1} + c_{k-1} I ; c_k = -tr(A*M_k)/k
    for (int i = 0; i < n; ++i) m.at(i, i) += ck;
    m = a * m;
    ck = -m.trace() / k;
    c[n - k] = ck;
  }
  return c;
}

RatMat exp_nilpotent(const RatMat& nmat) {
  int n = nmat.rows();
  RatMat acc = RatMat::identity(n);
  RatMat term = RatMat::identity(n);
  BigRat fact = 1;
  for (int i = 1; i <= n; ++i) {
    term = term * nmat;
    if (term.is_zero()) break;
    fact *= i;
    acc = acc + term.scaled(BigRat(1) / fact);
  }
  return acc;
}

RatMat log_unipotent(const RatMat& u) {
  int n = u.rows();
  RatMat x = u - RatMat::identity(n);
  RatMat acc = RatMat::zero(n);
  RatMat term = RatMat::identity(n);
  for (int i = 1; i <= n; ++i) {
    term = term * x;
    if (term.is_zero()) break;
    BigRat coef = BigRat((i % 2) ? 1 : -1) / i;
    acc = acc + term.scaled(coef);
  }
  return acc;
}

}  // namespace wpg
