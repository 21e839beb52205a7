#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpg/poincare.hpp"

using namespace wpg;
using C = std::complex<double>;

TEST_CASE("profile endpoints and derivative bound") {
  CHECK(phi_profile(-1.0).value == 1.0);
  CHECK(phi_profile(0.0).value == 1.0);
  CHECK(phi_profile(1.0).value == 0.0);
  CHECK(phi_profile(2.0).value == 0.0);
  CHECK(phi_profile(0.5).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi_profile(0.25).d1 < 0.0);  // decreasing
  double B = phi_bound_constant();
  CHECK(B < 10.0);
  CHECK(B > 1.0);
}

TEST_CASE("local poincare metric entries and cusp volume") {
  auto chart = PoincareChart::punctured(2, 1, 0.9);
  std::vector<C> z{C(std::exp(-10.0), 0), C(0.3, 0.1)};
  auto g = local_poincare(chart, std::span<const C>(z));
  CHECK(g[0] == doctest::Approx(std::exp(20.0) / 100.0).epsilon(1e-12));
  CHECK(g[1] == 1.0);

  // volume of {r <= e^{-a}} is 2 pi / a: integrate g r dr dtheta in v = 1/log(1/r)
  double a = 10.0;
  int n = 4000;
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    double v = (i + 0.5) / n * (1.0 / a);
    double r = std::exp(-1.0 / v);
    std::vector<C> p{C(r, 0), C(0.0, 0.0)};
    auto gv = local_poincare(PoincareChart::punctured(1, 1, 0.9), std::span<const C>(p).first(1));
    acc += gv[0] * r * r / (v * v) * (1.0 / a / n) * 2 * std::numbers::pi;
  }
  CHECK(acc == doctest::Approx(2 * std::numbers::pi / a).epsilon(1e-6));

  std::vector<C> zero{C(0, 0), C(0, 0)};
  CHECK_THROWS(local_poincare(chart, std::span<const C>(zero)));
  std::vector<C> big{C(1.5, 0), C(0, 0)};
  CHECK_THROWS(local_poincare(chart, std::span<const C>(big)));
}

TEST_CASE("chart cut-off values") {
  CHECK(phi_eps(C(std::exp(-20.0), 0), 0.1) == 1.0);
  CHECK(phi_eps(C(std::exp(-4.0), 0), 0.1) == 0.0);
  double r = std::exp(-1.0 / 0.15);
  CHECK(phi_eps(C(r, 0), 0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS(phi_eps(C(1.2, 0), 0.1));
}

TEST_CASE("product cut-off") {
  auto chart = PoincareChart::punctured(2, 2, 0.9);
  std::vector<C> far{C(std::exp(-1.0), 0), C(std::exp(-1.0), 0)};
  CHECK(rho_eps(chart, std::span<const C>(far), 0.1) == 1.0);
  std::vector<C> deep{C(std::exp(-100.0), 0), C(std::exp(-1.0), 0)};
  CHECK(rho_eps(chart, std::span<const C>(deep), 0.1) == 0.0);
  double r = std::exp(-1.0 / 0.15);
  std::vector<C> mid{C(r, 0), C(r, 0)};
  CHECK(rho_eps(chart, std::span<const C>(mid), 0.1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("support and monotonicity of rho_eps") {
  auto chart = PoincareChart::punctured(1, 1, 0.9);
  for (int i = 0; i < 200; ++i) {
    double v = 0.01 + 0.5 * i / 200.0;
    std::vector<C> z{std::polar(std::exp(-1.0 / v), 0.3)};
    double eps = 0.1;
    double rho = rho_eps(chart, std::span<const C>(z), eps);
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0);
    double r = std::abs(z[0]);
    if (rho < 1.0) CHECK(r < std::exp(-1.0 / (2 * eps)) + 1e-15);
    if (rho > 0.0) CHECK(r > std::exp(-1.0 / eps) - 1e-15);
    // monotone in eps
    CHECK(rho_eps(chart, std::span<const C>(z), eps / 2) >= rho - 1e-15);
  }
}

TEST_CASE("hessian vanishes off the transition shell") {
  auto chart = PoincareChart::punctured(1, 1, 0.9);
  std::vector<C> z{C(std::exp(-3.0), 0)};  // v = 1/3, far outside eps = 0.05 shell
  auto H = rho_eps_hessian(chart, std::span<const C>(z), 0.05);
  CHECK(std::abs(H[0]) == 0.0);
}

TEST_CASE("hessian bound probe is eps-uniform and gradient-bounded") {
  auto chart = PoincareChart::punctured(1, 1, 0.9);
  auto probes = hessian_bound_probe(chart, {0.2, 0.1, 0.05}, 400);
  REQUIRE(probes.size() == 3);
  double cmin = 1e300, cmax = 0;
  for (const auto& p : probes) {
    CHECK(p.gradient_bound_ok);
    CHECK(p.hessian_constant > 0.0);
    cmin = std::min(cmin, p.hessian_constant);
    cmax = std::max(cmax, p.hessian_constant);
  }
  CHECK((cmax - cmin) / cmax < 0.2);

  // two-puncture variant stays bounded as well
  auto chart2 = PoincareChart::punctured(2, 2, 0.9);
  auto p2 = hessian_bound_probe(chart2, {0.2, 0.05}, 200);
  CHECK(p2[0].gradient_bound_ok);
  CHECK(std::abs(p2[0].hessian_constant - p2[1].hessian_constant) /
            std::max(p2[0].hessian_constant, p2[1].hessian_constant) <
        0.2);
}
