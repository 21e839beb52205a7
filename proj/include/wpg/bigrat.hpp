#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wpg {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& q) { return q.convert_to<double>(); }

template <class Real>
Real to_real(const BigRat& q) {
  return q.convert_to<Real>();
}

// Parses "p", "-p", or "p/q". Decimal points are rejected: model matrix
// entries must be bit-exact rationals.
BigRat rat_from_string(const std::string& s);
std::string rat_to_string(const BigRat& q);

// Exact binary expansion of a finite double.
BigRat rat_from_double(double x);

BigRat rat_abs(const BigRat& q);

// Element of Q(i).
struct GaussRat {
  BigRat re, im;

  GaussRat() = default;
  GaussRat(BigRat r) : re(std::move(r)) {}
  GaussRat(BigRat r, BigRat i) : re(std::move(r)), im(std::move(i)) {}
  GaussRat(int r) : re(r) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRat conj() const { return {re, -im}; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
  GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
  GaussRat operator*(const GaussRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }

  template <class Real>
  std::complex<Real> value() const {
    return {to_real<Real>(re), to_real<Real>(im)};
  }
};

// i^k for k mod 4 (k may be negative).
GaussRat gauss_i_pow(long k);

// Laurent polynomial in x = 1/(2*pi) with Gaussian-rational coefficients.
// This is the exact coefficient ring of all bigraded log series: every log
// factor in an orbit expansion carries one power of 1/(2*pi), and
// differentiation mixes powers, so the full polynomial ring is needed.
class PiPoly {
 public:
  PiPoly() = default;
  explicit PiPoly(GaussRat c) {
    if (!c.is_zero()) c_[0] = std::move(c);
  }
  PiPoly(int xpow, GaussRat c) {
    if (!c.is_zero()) c_[xpow] = std::move(c);
  }

  static PiPoly zero() { return {}; }
  static PiPoly one() { return PiPoly(GaussRat(1)); }

  bool is_zero() const { return c_.empty(); }
  const std::map<int, GaussRat>& terms() const { return c_; }

  PiPoly operator-() const;
  PiPoly operator+(const PiPoly& o) const;
  PiPoly operator-(const PiPoly& o) const;
  PiPoly operator*(const PiPoly& o) const;
  PiPoly& operator+=(const PiPoly& o);
  bool operator==(const PiPoly& o) const { return c_ == o.c_; }

  PiPoly scaled(const GaussRat& c) const;
  PiPoly conj() const;

  template <class Real>
  std::complex<Real> value() const {
    const Real x = Real(1) / (Real(2) * std::numbers::pi_v<Real>);
    std::complex<Real> acc{};
    for (const auto& [p, g] : c_) {
      Real xp = 1;
      for (int j = 0; j < (p < 0 ? -p : p); ++j) xp *= x;
      if (p < 0) xp = Real(1) / xp;
      acc += g.value<Real>() * xp;
    }
    return acc;
  }

  std::string str() const;

 private:
  void prune();
  std::map<int, GaussRat> c_;  // x-power -> coefficient
};

}  // namespace wpg
