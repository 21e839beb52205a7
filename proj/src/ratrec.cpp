#include "wpg/ratrec.hpp"

#include <sstream>

namespace wpg {

namespace {

BigInt floor_rat(const BigRat& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

BigInt ceil_rat(const BigRat& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt c = n / d;
  if (n > 0 && c * d != n) c += 1;
  return c;
}

bool is_integer(const BigRat& q) { return denominator(q) == 1; }

// Continued-fraction walk for the simplest rational in an interval with
// endpoint openness flags; assumes lo <= hi.
std::optional<BigRat> simplest_rec(const BigRat& lo, const BigRat& hi, bool open_lo,
                                   bool open_hi) {
  if (lo > hi) return std::nullopt;
  if (lo == hi) {
    if (open_lo || open_hi) return std::nullopt;
    return lo;
  }
  // integers in the interval?
  BigInt ilo = is_integer(lo) ? (open_lo ? numerator(lo) + 1 : numerator(lo)) : ceil_rat(lo);
  BigInt ihi = is_integer(hi) ? (open_hi ? numerator(hi) - 1 : numerator(hi)) : floor_rat(hi);
  if (ilo <= ihi) {
    BigInt pick;
    if (ilo <= 0 && 0 <= ihi)
      pick = 0;
    else if (ilo > 0)
      pick = ilo;
    else
      pick = ihi;
    return BigRat(pick);
  }
  // both endpoints inside [n, n+1): recurse on reciprocals
  BigInt n = floor_rat(lo);
  BigRat flo = lo - BigRat(n), fhi = hi - BigRat(n);
  if (flo == 0) {
    // interval is (n, n + fhi]: reciprocal space is [1/fhi, infinity)
    BigRat t = BigRat(1) / fhi;
    BigInt c = ceil_rat(t);
    if (open_hi && is_integer(t)) c += 1;
    return BigRat(n) + BigRat(1) / BigRat(c);
  }
  // 1/(x - n) maps (flo, fhi) to (1/fhi, 1/flo) with openness swapped
  auto s = simplest_rec(BigRat(1) / fhi, BigRat(1) / flo, open_hi, open_lo);
  if (!s) return std::nullopt;
  return BigRat(n) + BigRat(1) / *s;
}

}  // namespace

std::optional<BigRat> simplest_in(const BigRat& lo, const BigRat& hi, bool open_lo,
                                  bool open_hi) {
  return simplest_rec(lo, hi, open_lo, open_hi);
}

RationalizeResult rationalize(double value, double err, const BigInt& max_den) {
  return rationalize(rat_from_double(value), rat_from_double(err), max_den);
}

RationalizeResult rationalize(const BigRat& value, const BigRat& err, const BigInt& max_den) {
  if (err < 0) throw std::invalid_argument("negative error bound");
  if (max_den < 1) throw std::invalid_argument("denominator cap must be >= 1");
  BigRat lo = value - err, hi = value + err;

  RationalizeResult out;
  auto best = simplest_in(lo, hi, false, false);
  if (!best) {
    out.message = "empty interval";
    return out;
  }
  BigRat cand = *best;
  if (denominator(cand) > max_den) {
    out.message = "no rational with denominator <= cap in the interval";
    return out;
  }
  // the nearest competitors live in the open flanks on either side
  auto left = simplest_in(lo, cand, false, true);
  auto right = simplest_in(cand, hi, true, false);
  BigInt next = 0;
  std::optional<BigRat> other;
  if (left && (next == 0 || denominator(*left) < next)) {
    next = denominator(*left);
    other = *left;
  }
  if (right && (next == 0 || denominator(*right) < next)) {
    next = denominator(*right);
    other = *right;
  }
  out.candidate.num = numerator(cand);
  out.candidate.den = denominator(cand);
  out.candidate.next_denominator = next;
  out.candidate.nearest_other = other;
  out.candidate.unique = (next == 0 || next > max_den);
  out.found = out.candidate.unique;
  if (!out.found) {
    std::ostringstream os;
    os << "no unique candidate: " << rat_to_string(cand) << " and " << rat_to_string(*other)
       << " both lie in the interval under the cap";
    out.message = os.str();
  }
  return out;
}

std::vector<BigRat> brute_force_rationals(const BigRat& lo, const BigRat& hi, long max_den) {
  if (max_den > 10000) throw std::invalid_argument("enumeration cap limited to 1e4");
  std::vector<BigRat> out;
  for (long q = 1; q <= max_den; ++q) {
    BigInt plo = ceil_rat(lo * q), phi = floor_rat(hi * q);
    for (BigInt p = plo; p <= phi; ++p) {
      if (gcd(BigInt(p), BigInt(q)) != 1) continue;
      out.push_back(BigRat(p, q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wpg
