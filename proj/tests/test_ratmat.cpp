#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wpg/ratmat.hpp"

using namespace wpg;

namespace {
RatMat mat2(long a, long b, long c, long d) {
  RatMat m(2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}
}  // namespace

TEST_CASE("determinant and inverse") {
  RatMat m = mat2(1, 2, 3, 4);
  CHECK(m.det() == BigRat(-2));
  RatMat inv = m.inverse();
  CHECK(m * inv == RatMat::identity(2));
  CHECK_THROWS(mat2(1, 2, 2, 4).inverse());
}

TEST_CASE("characteristic polynomial") {
  RatMat m = mat2(0, -1, 1, 0);
  RatPoly chi = charpoly(m);  // t^2 + 1
  REQUIRE(chi.size() == 3);
  CHECK(chi[0] == BigRat(1));
  CHECK(chi[1] == BigRat(0));
  CHECK(chi[2] == BigRat(1));

  RatMat j = mat2(2, 1, 0, 2);
  RatPoly c2 = charpoly(j);  // (t-2)^2 = t^2 -4t +4
  CHECK(c2[0] == BigRat(4));
  CHECK(c2[1] == BigRat(-4));
}

TEST_CASE("polynomial gcd and squarefree part") {
  // (t-1)^2 (t+2)
  RatPoly p = poly_mul(poly_mul({-1, 1}, {-1, 1}), {2, 1});
  RatPoly g = poly_gcd(p, poly_derivative(p));
  REQUIRE(g.size() == 2);  // t - 1
  CHECK(g[0] == BigRat(-1));
  RatPoly sf = poly_div_exact(p, g);  // (t-1)(t+2)
  CHECK(sf.size() == 3);
}

TEST_CASE("nilpotent exp and unipotent log invert each other") {
  RatMat n(3, 3);
  n.at(1, 0) = 1;
  n.at(2, 1) = BigRat(1, 2);
  RatMat u = exp_nilpotent(n);
  CHECK(log_unipotent(u) == n);
  CHECK(u.at(2, 0) == BigRat(1, 4));  // (1/2)*N^2 entry: 1*(1/2)/2
}

TEST_CASE("height guard sees big entries") {
  RatMat m = mat2(2, 0, 0, 1);
  RatMat p = m.pow(100);
  CHECK(p.height_bits() >= 100);
}
