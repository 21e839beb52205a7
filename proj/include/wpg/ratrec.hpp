#pragma once

#include <optional>
#include <vector>

#include "wpg/bigrat.hpp"

namespace wpg {

// Smallest-denominator rational in an interval; endpoints may be open.
// Among integers the one closest to zero wins.
std::optional<BigRat> simplest_in(const BigRat& lo, const BigRat& hi, bool open_lo,
                                  bool open_hi);

struct RationalCandidate {
  BigInt num = 0;
  BigInt den = 1;
  bool unique = false;
  // Denominator of the nearest other rational in the interval (0 when none):
  // the candidate stays the unique answer for any cap below this.
  BigInt next_denominator = 0;
  std::optional<BigRat> nearest_other;
};

struct RationalizeResult {
  bool found = false;  // false: no unique candidate under the cap
  RationalCandidate candidate;
  std::string message;
};

// Smallest-denominator rational in [value-err, value+err], reported only when
// it is the sole rational with denominator <= max_den in the interval.
RationalizeResult rationalize(const BigRat& value, const BigRat& err, const BigInt& max_den);
RationalizeResult rationalize(double value, double err, const BigInt& max_den);

// Ground-truth enumeration of all reduced fractions in the interval.
std::vector<BigRat> brute_force_rationals(const BigRat& lo, const BigRat& hi, long max_den);

}  // namespace wpg
