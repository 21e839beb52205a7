#pragma once

#include <functional>
#include <string>

#include "wpg/poincare.hpp"
#include "wpg/wpmetric.hpp"

namespace wpg {

// Integration region on (punctured disk)^k x disk^(m-k).  Radial cells are
// placed in v = 1/log(1/r), which equidistributes the Poincare measure
// dr/(r log^2(1/r)) = d(1/log(1/r)) and keeps cell counts independent of how
// deep the shell reaches.
struct ChartSpec {
  int vars = 1;
  int punctures = 1;
  bool modular = false;  // fundamental-domain mask pulled back through z = e^{2 pi i tau}
  std::vector<std::pair<double, double>> radial;  // per puncture: [r_in, r_out], r_in may be 0
  std::vector<double> disk_radius;                // per regular variable

  static ChartSpec annulus(double r_in, double r_out) {
    ChartSpec c;
    c.radial = {{r_in, r_out}};
    return c;
  }
  static ChartSpec modular_chart() {
    ChartSpec c;
    c.modular = true;
    c.radial = {{0.0, 1.0}};
    return c;
  }
};

struct IntegralEstimate {
  double value = 0;
  double bracket = 0;  // refinement difference, a working error bar, not a proof
  double eps = 0;
  int form_k = 0, form_l = 0;
  int level = 0;
  long cells = 0;
};

struct QuadratureOptions {
  int threads = 1;
  int base_radial = 8;
  int base_angular = 8;
  std::string csv_path;  // per-cell audit rows when nonempty
};

// Integral of rho_eps * Ric(omega)^k wedge omega^l over the chart, with the
// (i/2pi)^m normalization per form factor.  eps = 0 disables the cut-off.
IntegralEstimate integrate_form(const GeometryContext& ctx, const ChartSpec& chart, int k, int l,
                                double eps, int level, const QuadratureOptions& opts = {});

struct EpsLimit {
  double value = 0;
  double uncertainty = 0;
  bool cauchy = true;
  int used_points = 0;
  double slope = 0;
};

// Extrapolates estimates over a decreasing eps sequence to eps -> 0.  The
// cut-off tail is linear in eps, so the fit is a line; leading points that
// deviate from the linear regime (support hitting the chart boundary) are
// dropped before extrapolating.
EpsLimit eps_limit(const std::vector<IntegralEstimate>& estimates);

// m = 1 oracle: the enclosed integral of omega_WP over an annulus equals the
// difference of circle averages of -(1/4pi) r d_r log h, spectrally accurate.
double stokes_volume_1d(const GeometryContext& ctx, double inner, double outer, int nodes = 256);

struct ShellContribution {
  double eps_hi = 0, eps_lo = 0;
  double value = 0;  // integral of |log h| against the Poincare measure
};

std::vector<ShellContribution> log_integrability_probe(const GeometryContext& ctx,
                                                       const std::vector<double>& eps_list);

}  // namespace wpg
