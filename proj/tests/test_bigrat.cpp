#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wpg/bigrat.hpp"

using namespace wpg;

TEST_CASE("rational parsing round trip") {
  CHECK(rat_from_string("3/4") == BigRat(3, 4));
  CHECK(rat_from_string("-7") == BigRat(-7));
  CHECK(rat_from_string(" 22 / 7 ") == BigRat(22, 7));
  CHECK(rat_to_string(BigRat(-5, 3)) == "-5/3");
  CHECK(rat_to_string(BigRat(4)) == "4");
  CHECK_THROWS_AS(rat_from_string("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1e-3"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
}

TEST_CASE("exact double conversion") {
  CHECK(rat_from_double(0.5) == BigRat(1, 2));
  CHECK(rat_from_double(-0.75) == BigRat(-3, 4));
  CHECK(to_double(rat_from_double(0.1)) == 0.1);
}

TEST_CASE("gaussian rational arithmetic") {
  GaussRat a(BigRat(1), BigRat(2));   // 1 + 2i
  GaussRat b(BigRat(3), BigRat(-1));  // 3 - i
  GaussRat p = a * b;                 // (3+2) + (6-1)i
  CHECK(p.re == BigRat(5));
  CHECK(p.im == BigRat(5));
  CHECK(gauss_i_pow(2) == GaussRat(-1));
  CHECK(gauss_i_pow(-1) == GaussRat(BigRat(0), BigRat(-1)));
  CHECK((a.conj() * a).im == BigRat(0));
}

TEST_CASE("pi polynomial ring") {
  PiPoly one = PiPoly::one();
  PiPoly x(1, GaussRat(1));  // x = 1/(2 pi)
  PiPoly p = x * x + one;
  auto v = p.value<double>();
  double xx = 1.0 / (2.0 * std::numbers::pi);
  CHECK(v.real() == doctest::Approx(1.0 + xx * xx).epsilon(1e-15));
  CHECK(v.imag() == 0.0);
  CHECK((p - p).is_zero());
  PiPoly q(-2, GaussRat(BigRat(1), BigRat(1)));
  CHECK((q.conj() * q).terms().size() == 1);
  // (1-i)(1+i) = 2 at x^-4
  CHECK(((q.conj() * q).terms().begin())->second == GaussRat(2));
  CHECK((q.conj() * q).terms().begin()->first == -4);
}
