#pragma once

#include <vector>

#include "wpg/bigrat.hpp"

namespace wpg {

// Dense rational matrix. Sizes here are Hodge-bundle ranks (single digits),
// so plain Gaussian elimination over exact rationals is the right tool.
class RatMat {
 public:
  RatMat() = default;
  RatMat(int rows, int cols) : r_(rows), c_(cols), a_(rows * cols) {}

  static RatMat identity(int n);
  static RatMat zero(int n) { return RatMat(n, n); }

  int rows() const { return r_; }
  int cols() const { return c_; }
  BigRat& at(int i, int j) { return a_[i * c_ + j]; }
  const BigRat& at(int i, int j) const { return a_[i * c_ + j]; }

  bool is_zero() const;
  bool operator==(const RatMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  RatMat operator*(const RatMat& o) const;
  RatMat scaled(const BigRat& s) const;
  RatMat transpose() const;
  RatMat pow(unsigned long e) const;

  BigRat det() const;
  RatMat inverse() const;  // throws std::domain_error if singular
  BigRat trace() const;

  // Largest numerator/denominator bit length over all entries.
  unsigned height_bits() const;

  std::vector<GaussRat> apply(const std::vector<GaussRat>& v) const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<BigRat> a_;
};

// Polynomials over Q, coefficients low to high.
using RatPoly = std::vector<BigRat>;

RatPoly poly_trim(RatPoly p);
RatPoly poly_mul(const RatPoly& a, const RatPoly& b);
RatPoly poly_derivative(const RatPoly& p);
// Remainder of a by b (b monic-normalized internally).
RatPoly poly_mod(const RatPoly& a, const RatPoly& b);
RatPoly poly_gcd(RatPoly a, RatPoly b);  // monic
RatPoly poly_div_exact(const RatPoly& a, const RatPoly& b);
RatMat poly_eval(const RatPoly& p, const RatMat& x);

// Monic characteristic polynomial, exact (Faddeev-LeVerrier).
RatPoly charpoly(const RatMat& a);

// exp of a nilpotent matrix, log of a unipotent matrix: finite sums.
RatMat exp_nilpotent(const RatMat& n);
RatMat log_unipotent(const RatMat& u);

}  // namespace wpg
