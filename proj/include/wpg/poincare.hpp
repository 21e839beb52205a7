#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wpg {

// Punctured polydisk chart carrying the local Poincare metric
//   1/(r^2 (log 1/r)^2) on puncture variables, Euclidean elsewhere.
struct PoincareChart {
  int vars = 1;
  int punctures = 1;
  std::vector<double> outer_radius;  // per variable, < 1 on punctures

  static PoincareChart punctured(int vars, int punctures, double outer = 0.5) {
    PoincareChart c;
    c.vars = vars;
    c.punctures = punctures;
    c.outer_radius.assign(vars, outer);
    return c;
  }
};

// Decreasing quintic profile: 1 on t<=0, 0 on t>=1, C^2 with flat ends.
// sup(|phi'| + |phi''|) is about 6.7, below the required bound 10.
struct PhiValue {
  double value, d1, d2;
};
PhiValue phi_profile(double t);
double phi_bound_constant();  // sup over a dense grid of |phi'| + |phi''|

// Diagonal local Poincare metric entries at z.
std::vector<double> local_poincare(const PoincareChart& chart,
                                   std::span<const std::complex<double>> z);

// Chart cut-off in one variable: phi(((log 1/r)^{-1} - eps)/eps).
// Equals 1 for r <= e^{-1/eps}, 0 for r >= e^{-1/(2 eps)}.
double phi_eps(std::complex<double> z, double eps);

// Product cut-off rho_eps = prod_j (1 - phi_eps(z_j)) over punctures.
double rho_eps(const PoincareChart& chart, std::span<const std::complex<double>> z, double eps);

// Complex Hessian of rho_eps (m x m, row-major), from the closed-form
// derivatives of the profile.
std::vector<std::complex<double>> rho_eps_hessian(const PoincareChart& chart,
                                                  std::span<const std::complex<double>> z,
                                                  double eps);

struct HessianProbe {
  double eps;
  double hessian_constant;   // sup |eig| of the Hessian against the Poincare form
  double gradient_constant;  // sup of |d phi_eps| * r log(1/r)
  bool gradient_bound_ok;    // gradient_constant <= 10 at every sample
};

// Samples the transition shells and returns per-eps constants.
std::vector<HessianProbe> hessian_bound_probe(const PoincareChart& chart,
                                              const std::vector<double>& eps_list,
                                              int sample_count);

}  // namespace wpg
