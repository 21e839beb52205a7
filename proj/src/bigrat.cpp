#include "wpg/bigrat.hpp"

#include <cmath>
#include <sstream>

namespace wpg {

BigRat rat_from_string(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  if (t.find('.') != std::string::npos || t.find('e') != std::string::npos ||
      t.find('E') != std::string::npos)
    throw std::invalid_argument("float literal not allowed in rational field: \"" + s + "\"");
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(t));
    BigInt num(t.substr(0, slash));
    BigInt den(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return BigRat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational literal: \"" + s + "\"");
  }
}

std::string rat_to_string(const BigRat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

BigRat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  if (x == 0.0) return BigRat(0);
  int exp2 = 0;
  double frac = std::frexp(x, &exp2);  // x = frac * 2^exp2, |frac| in [0.5, 1)
  BigInt mant = BigInt(static_cast<long long>(std::ldexp(frac, 53)));
  exp2 -= 53;
  BigRat r(mant);
  if (exp2 > 0)
    r *= BigRat(BigInt(1) << exp2);
  else if (exp2 < 0)
    r /= BigRat(BigInt(1) << (-exp2));
  return r;
}

BigRat rat_abs(const BigRat& q) { return q < 0 ? BigRat(-q) : q; }

GaussRat gauss_i_pow(long k) {
  long r = ((k % 4) + 4) % 4;
  switch (r) {
    case 0: return GaussRat(1);
    case 1: return GaussRat(BigRat(0), BigRat(1));
    case 2: return GaussRat(-1);
    default: return GaussRat(BigRat(0), BigRat(-1));
  }
}

void PiPoly::prune() {
  for (auto it = c_.begin(); it != c_.end();)
    it = it->second.is_zero() ? c_.erase(it) : std::next(it);
}

PiPoly PiPoly::operator-() const {
  PiPoly r;
  for (const auto& [p, g] : c_) r.c_[p] = -g;
  return r;
}

PiPoly PiPoly::operator+(const PiPoly& o) const {
  PiPoly r = *this;
  r += o;
  return r;
}

PiPoly& PiPoly::operator+=(const PiPoly& o) {
  for (const auto& [p, g] : o.c_) {
    auto [it, fresh] = c_.emplace(p, g);
    if (!fresh) it->second += g;
  }
  prune();
  return *this;
}

PiPoly PiPoly::operator-(const PiPoly& o) const { return *this + (-o); }

PiPoly PiPoly::operator*(const PiPoly& o) const {
  PiPoly r;
  for (const auto& [p, g] : c_)
    for (const auto& [q, h] : o.c_) {
      auto [it, fresh] = r.c_.emplace(p + q, g * h);
      if (!fresh) it->second += g * h;
    }
  r.prune();
  return r;
}

PiPoly PiPoly::scaled(const GaussRat& c) const {
  PiPoly r;
  if (c.is_zero()) return r;
  for (const auto& [p, g] : c_) r.c_[p] = g * c;
  return r;
}

PiPoly PiPoly::conj() const {
  PiPoly r;
  for (const auto& [p, g] : c_) r.c_[p] = g.conj();
  return r;
}

std::string PiPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, g] : c_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << rat_to_string(g.re);
    if (g.im != 0) os << (g.im > 0 ? "+" : "") << rat_to_string(g.im) << "i";
    os << ")";
    if (p != 0) os << "*x^" << p;
  }
  return os.str();
}

}  // namespace wpg
