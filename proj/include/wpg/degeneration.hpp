#pragma once

#include "wpg/model.hpp"

namespace wpg {

// Homogeneous bidegree-k piece of the leading term along a divisor:
// f(z, zbar) = sum_s coeff[s] z^s zbar^{k-s}, with the log power carried by l.
// Coefficients are the transverse-slice sub-series evaluated at a sample point
// (they are constants when the model has one variable).
struct LeadingTerm {
  int divisor = 0;
  int k = 0;
  int l = 0;
  std::vector<std::complex<double>> coeffs;  // size k+1, index s
};

struct PositivityOutcome {
  bool ok = false;
  double c = 0;  // f = c r^k when ok
  int k = 0;
  std::string violation;  // nonempty when not ok
};

// Expansion of (Omega,conj Omega)^{2m} r_j^2 det(g) as an exact bigraded
// series; nonnegative powers in z_j by construction.
PotSeries gtilde_series(const VHSModel& model, int divisor,
                        double degree_cap = std::numeric_limits<double>::infinity());

// Extracts the minimal-degree homogeneous piece along the divisor, degree
// s + t - l/(m n + 1).  Throws on an ambiguous minimal degree (two distinct
// (k,l) pairs tie) and on the zero series.
LeadingTerm leading_term(const VHSModel& model, const PotSeries& gtilde, int divisor,
                         const std::vector<std::complex<double>>* transverse = nullptr);

// A real nonnegative homogeneous polynomial with Poincare-bounded log-Hessian
// must be c r^k with k even: checks the balanced-coefficient shape.
PositivityOutcome homogeneous_positivity_check(const std::vector<std::complex<double>>& coeffs,
                                               double tol = 1e-9);

struct DegenerationOrder {
  int divisor = 0;
  int k = 0, l = 0;
  long tau = 0;
  double leading_constant = 0;
};

DegenerationOrder degeneration_order(const VHSModel& model, int divisor);

struct OrderConstancyReport {
  bool constant = true;
  int samples_used = 0;
  int samples_skipped = 0;  // below the genericity threshold
  std::vector<std::string> notes;
};

// Recomputes (k,l) at sampled transverse points; vacuous for one variable.
OrderConstancyReport order_constancy_probe(const VHSModel& model, int divisor, int samples,
                                           double genericity_threshold = 1e-8);

}  // namespace wpg
