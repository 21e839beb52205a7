#include "wpg/poincare.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace wpg {

PhiValue phi_profile(double t) {
  if (t <= 0.0) return {1.0, 0.0, 0.0};
  if (t >= 1.0) return {0.0, 0.0, 0.0};
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  return {1.0 - (10 * t3 - 15 * t4 + 6 * t5),
          -(30 * t2 - 60 * t3 + 30 * t4),
          -(60 * t - 180 * t2 + 120 * t3)};
}

double phi_bound_constant() {
  double sup = 0;
  for (int i = 0; i <= 4000; ++i) {
    auto v = phi_profile(i / 4000.0);
    sup = std::max(sup, std::abs(v.d1) + std::abs(v.d2));
  }
  return sup;
}

std::vector<double> local_poincare(const PoincareChart& chart,
                                   std::span<const std::complex<double>> z) {
  std::vector<double> g(chart.vars);
  for (int i = 0; i < chart.vars; ++i) {
    if (i < chart.punctures) {
      double r = std::abs(z[i]);
      if (r <= 0.0) throw std::domain_error("puncture coordinate is zero");
      if (r >= 1.0) throw std::domain_error("local Poincare metric needs r < 1");
      double w = std::log(1.0 / r);
      g[i] = 1.0 / (r * r * w * w);
    } else {
      g[i] = 1.0;
    }
  }
  return g;
}

double phi_eps(std::complex<double> z, double eps) {
  double r = std::abs(z);
  if (r >= 1.0) throw std::domain_error("cut-off defined for r < 1");
  if (r == 0.0) return 1.0;
  double v = 1.0 / std::log(1.0 / r);
  return phi_profile((v - eps) / eps).value;
}

double rho_eps(const PoincareChart& chart, std::span<const std::complex<double>> z, double eps) {
  double rho = 1.0;
  for (int j = 0; j < chart.punctures; ++j) rho *= 1.0 - phi_eps(z[j], eps);
  return rho;
}

namespace {

struct CutoffDerivs {
  double one_minus_phi;               // 1 - phi_eps
  std::complex<double> d;             // d/dz (1 - phi_eps)
  double dd;                          // d2/(dz dzbar) (1 - phi_eps), real
};

CutoffDerivs cutoff_derivs(std::complex<double> z, double eps) {
  double r = std::abs(z);
  double w = std::log(1.0 / r);
  double v = 1.0 / w;
  auto p = phi_profile((v - eps) / eps);
  CutoffDerivs out;
  out.one_minus_phi = 1.0 - p.value;
  // d phi_eps = (1/(2 eps)) phi' / (z w^2)
  out.d = -(p.d1 / (2.0 * eps)) / (z * w * w);
  // dd phi_eps = phi''/(4 eps^2 r^2 w^4) + phi'/(2 eps r^2 w^3)
  out.dd = -(p.d2 / (4.0 * eps * eps * r * r * std::pow(w, 4)) +
             p.d1 / (2.0 * eps * r * r * std::pow(w, 3)));
  return out;
}

}  // namespace

std::vector<std::complex<double>> rho_eps_hessian(const PoincareChart& chart,
                                                  std::span<const std::complex<double>> z,
                                                  double eps) {
  const int m = chart.vars;
  const int k = chart.punctures;
  std::vector<CutoffDerivs> f(k);
  for (int j = 0; j < k; ++j) f[j] = cutoff_derivs(z[j], eps);
  std::vector<std::complex<double>> H(m * m, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::complex<double> val;
      if (i == j) {
        val = f[i].dd;
        for (int t = 0; t < k; ++t)
          if (t != i) val *= f[t].one_minus_phi;
      } else {
        val = f[i].d * std::conj(f[j].d);
        for (int t = 0; t < k; ++t)
          if (t != i && t != j) val *= f[t].one_minus_phi;
      }
      H[i * m + j] = val;
    }
  return H;
}

std::vector<HessianProbe> hessian_bound_probe(const PoincareChart& chart,
                                              const std::vector<double>& eps_list,
                                              int sample_count) {
  std::vector<HessianProbe> out;
  const int m = chart.vars;
  const int k = chart.punctures;
  for (double eps : eps_list) {
    HessianProbe pr{eps, 0.0, 0.0, true};
    for (int s = 0; s < sample_count; ++s) {
      // samples concentrated on the transition shell eps < v < 2 eps
      double frac = (s + 0.5) / sample_count;
      double v = eps * (1.0 + frac);
      double r = std::exp(-1.0 / v);
      double theta = 2.0 * std::numbers::pi * frac;
      std::vector<std::complex<double>> z(m, std::complex<double>(0.3, 0.0));
      for (int j = 0; j < k; ++j) z[j] = std::polar(r, theta + 0.37 * j);

      auto H = rho_eps_hessian(chart, std::span<const std::complex<double>>(z), eps);
      auto P = local_poincare(chart, std::span<const std::complex<double>>(z));
      Eigen::MatrixXcd A(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          A(i, j) = H[i * m + j] / std::sqrt(P[i] * P[j]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
      double lam = 0;
      for (int i = 0; i < m; ++i) lam = std::max(lam, std::abs(es.eigenvalues()[i]));
      pr.hessian_constant = std::max(pr.hessian_constant, lam);

      for (int j = 0; j < k; ++j) {
        auto d = cutoff_derivs(z[j], eps);
        double rr = std::abs(z[j]);
        double w = std::log(1.0 / rr);
        double ratio = std::abs(d.d) * rr * w;
        pr.gradient_constant = std::max(pr.gradient_constant, ratio);
      }
    }
    pr.gradient_bound_ok = pr.gradient_constant <= 10.0;
    out.push_back(pr);
  }
  return out;
}

}  // namespace wpg
