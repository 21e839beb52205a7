#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/corpus.hpp"
#include "wpg/quadrature.hpp"

using namespace wpg;
namespace cp = wpg::corpus;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("annulus volume against the closed form and the contour oracle") {
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  auto chart = ChartSpec::annulus(std::exp(-2.0), std::exp(-1.0));

  auto est = integrate_form(ctx, chart, 0, 1, 0.1, 3);
  CHECK(est.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(est.bracket < 1e-6);

  double stokes = stokes_volume_1d(ctx, std::exp(-2.0), std::exp(-1.0));
  CHECK(std::abs(stokes - 0.25) < 1e-10);
  CHECK(std::abs(est.value - stokes) <= std::max(est.bracket, 1e-12));
}

TEST_CASE("ricci form integral is -2 times the volume at weight 1") {
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  auto chart = ChartSpec::annulus(std::exp(-2.0), std::exp(-1.0));
  auto vol = integrate_form(ctx, chart, 0, 1, 0.1, 2);
  auto ric = integrate_form(ctx, chart, 1, 0, 0.1, 2);
  CHECK(ric.value == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(std::abs(ric.value + 2.0 * vol.value) < 2 * (vol.bracket + ric.bracket) + 1e-10);
}

TEST_CASE("flat model integrates to zero") {
  auto flat = cp::constant();
  GeometryContext ctx(flat);
  auto chart = ChartSpec::annulus(std::exp(-2.0), std::exp(-1.0));
  auto est = integrate_form(ctx, chart, 0, 1, 0.1, 1);
  CHECK(std::abs(est.value) < 1e-14);
  CHECK(std::abs(stokes_volume_1d(ctx, std::exp(-2.0), std::exp(-1.0))) < 1e-12);
}

TEST_CASE("bracket validity across refinement levels") {
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  // an angular-dependent model makes the brackets meaningful
  auto mm = cp::elliptic_plus({{1, cp::gvec({{1, 2}, {0, 1}})}});
  GeometryContext ctx2(mm);
  auto chart = ChartSpec::annulus(std::exp(-3.0), std::exp(-1.5));
  for (const GeometryContext* c : {&ctx, &ctx2}) {
    auto e1 = integrate_form(*c, chart, 0, 1, 0.1, 1);
    auto e2 = integrate_form(*c, chart, 0, 1, 0.1, 2);
    auto e3 = integrate_form(*c, chart, 0, 1, 0.1, 3);
    CHECK(std::abs(e2.value - e1.value) <= e1.bracket + 1e-12);
    CHECK(std::abs(e3.value - e2.value) <= e2.bracket + 1e-12);
  }
}

TEST_CASE("chart additivity under a radial split") {
  auto mm = cp::elliptic_plus({{1, cp::gvec({{1, 2}, {0, 1}})}});
  GeometryContext ctx(mm);
  double a = std::exp(-3.0), b = std::exp(-1.5), mid = std::exp(-2.2);
  auto whole = integrate_form(ctx, ChartSpec::annulus(a, b), 0, 1, 0.1, 2);
  auto lo = integrate_form(ctx, ChartSpec::annulus(a, mid), 0, 1, 0.1, 2);
  auto hi = integrate_form(ctx, ChartSpec::annulus(mid, b), 0, 1, 0.1, 2);
  CHECK(std::abs(whole.value - lo.value - hi.value) <=
        whole.bracket + lo.bracket + hi.bracket + 1e-10);
}

TEST_CASE("cut-off monotone convergence on a divisor chart") {
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  auto chart = ChartSpec::annulus(0.0, std::exp(-1.0));
  double prev = -1;
  for (double eps : {0.2, 0.1, 0.05}) {
    auto est = integrate_form(ctx, chart, 0, 1, eps, 2);
    CHECK(est.value > prev - 1e-12);
    prev = est.value;
  }
}

TEST_CASE("eps extrapolation") {
  SUBCASE("constant sequence returns the constant") {
    std::vector<IntegralEstimate> es;
    for (double e : {0.1, 0.05, 0.025})
      es.push_back({1.0, 1e-12, e, 0, 1, 2, 100});
    auto lim = eps_limit(es);
    CHECK(lim.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lim.uncertainty < 1e-10);
  }
  SUBCASE("linear sequence v = 1 + eps") {
    std::vector<IntegralEstimate> es;
    for (double e : {0.1, 0.05, 0.025})
      es.push_back({1.0 + e, 1e-12, e, 0, 1, 2, 100});
    auto lim = eps_limit(es);
    CHECK(lim.value == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("non-Cauchy input is flagged") {
    std::vector<IntegralEstimate> es;
    es.push_back({1.0, 1e-12, 0.1, 0, 1, 2, 100});
    es.push_back({1.001, 1e-12, 0.05, 0, 1, 2, 100});
    es.push_back({1.01, 1e-12, 0.025, 0, 1, 2, 100});
    auto lim = eps_limit(es);
    CHECK(!lim.cauchy);
  }
  SUBCASE("modular volume converges to 1/12") {
    auto m = cp::elliptic();
    GeometryContext ctx(m);
    auto chart = ChartSpec::modular_chart();
    std::vector<IntegralEstimate> es;
    for (double e : {0.1, 0.05, 0.025}) es.push_back(integrate_form(ctx, chart, 0, 1, e, 1));
    auto lim = eps_limit(es);
    CHECK(std::abs(lim.value - 1.0 / 12.0) < 1e-3);
  }
}

TEST_CASE("product model volume factorizes") {
  auto m = cp::product();
  GeometryContext ctx(m);
  ChartSpec chart;
  chart.vars = 2;
  chart.punctures = 2;
  chart.radial = {{std::exp(-2.0), std::exp(-1.0)}, {std::exp(-2.0), std::exp(-1.0)}};
  QuadratureOptions opts;
  opts.base_radial = 4;
  opts.base_angular = 4;
  auto est = integrate_form(ctx, chart, 0, 2, 0.1, 1, opts);
  // omega^2 = 2 omega_1 wedge omega_2: each factor contributes 1/4
  CHECK(est.value == doctest::Approx(2.0 * 0.25 * 0.25).epsilon(1e-6));
}

TEST_CASE("deterministic across thread counts") {
  auto mm = cp::elliptic_plus({{1, cp::gvec({{1, 2}, {0, 1}})}});
  GeometryContext ctx(mm);
  auto chart = ChartSpec::annulus(std::exp(-3.0), std::exp(-1.5));
  QuadratureOptions o1, o2;
  o1.threads = 1;
  o2.threads = 2;
  auto a = integrate_form(ctx, chart, 0, 1, 0.1, 2, o1);
  auto b = integrate_form(ctx, chart, 0, 1, 0.1, 2, o2);
  CHECK(a.value == b.value);  // identical chunked reduction order
}

TEST_CASE("log integrability shells decrease") {
  for (const auto& m : {cp::elliptic(), cp::weight3()}) {
    GeometryContext ctx(m);
    std::vector<double> eps;
    for (int i = 0; i <= 5; ++i) eps.push_back(0.1 / std::pow(2.0, i));
    auto shells = log_integrability_probe(ctx, eps);
    REQUIRE(shells.size() == 5);
    for (size_t i = 1; i < shells.size(); ++i) CHECK(shells[i].value < shells[i - 1].value);
  }
  // closed form for the leading shell of the weight-1 cusp:
  // integral of -log(pi v) over [eps2, eps1] x circle
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  auto shells = log_integrability_probe(ctx, {0.1, 0.05});
  auto F = [](double v) { return v * (1.0 - std::log(kPi * v)); };
  double want = 2 * kPi * (F(0.1) - F(0.05));
  CHECK(shells[0].value == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("error paths") {
  auto m = cp::elliptic();
  GeometryContext ctx(m);
  CHECK_THROWS_AS(integrate_form(ctx, ChartSpec::annulus(0.0, 0.3), 0, 1, 0.0, 1), ModelError);
  CHECK_THROWS_AS(integrate_form(ctx, ChartSpec::annulus(0.01, 0.3), 1, 1, 0.1, 1), ModelError);
  std::vector<IntegralEstimate> two{{1.0, 0, 0.1, 0, 1, 1, 1}, {1.0, 0, 0.05, 0, 1, 1, 1}};
  CHECK_THROWS_AS(eps_limit(two), ModelError);
}
