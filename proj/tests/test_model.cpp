#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "support/corpus.hpp"
#include "wpg/model.hpp"

using namespace wpg;
using C = std::complex<double>;
namespace cp = wpg::corpus;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<C> pt(C z) { return {z}; }

double pot(const VHSModel& m, C z) {
  auto p = pt(z);
  return potential<double>(m, std::span<const C>(p));
}
}  // namespace

TEST_CASE("validation of the elliptic model and two broken variants") {
  auto rep = validate(cp::elliptic());
  CHECK(rep.all_passed());

  // non-nilpotent N
  RatMat Q = cp::mat(2, {{0, 1}, {-1, 0}});
  RatMat badN = cp::mat(2, {{0, 0}, {1, 1}});
  std::vector<CoeffRecord> coeffs{{{0}, cp::gvec({{1, 0}, {0, 0}})}};
  VHSModel badn(1, 2, 1, 1, Q, {badN}, coeffs, BigRat(1, 2), {{0.01, 0.0}});
  auto repn = validate(badn);
  CHECK(!repn.all_passed());
  bool nilfail = false;
  for (const auto& c : repn.checks)
    if (c.name.find("nilpotency") != std::string::npos && !c.pass) nilfail = true;
  CHECK(nilfail);

  // symmetric Q with odd weight
  RatMat symQ = cp::mat(2, {{1, 0}, {0, 1}});
  VHSModel badq(1, 2, 1, 1, symQ, {cp::mat(2, {{0, 0}, {0, 0}})}, coeffs, BigRat(1, 2),
                {{0.01, 0.0}});
  auto repq = validate(badq);
  bool parfail = false;
  for (const auto& c : repq.checks)
    if (c.name.find("parity") != std::string::npos && !c.pass) parfail = true;
  CHECK(parfail);
}

TEST_CASE("omega evaluation against hand values") {
  auto m = cp::elliptic();
  {
    auto p = pt(C(std::exp(-2 * kPi), 0));
    auto v = evaluate_omega<double>(m, std::span<const C>(p));
    CHECK(std::abs(v[0] - C(1, 0)) < 1e-14);
    CHECK(std::abs(v[1] - C(0, 1)) < 1e-14);
  }
  {
    auto p = pt(std::polar(std::exp(-2 * kPi), kPi / 2));
    auto v = evaluate_omega<double>(m, std::span<const C>(p));
    CHECK(std::abs(v[1] - C(0.25, 1)) < 1e-14);
  }
  {
    // N = 0 keeps A_0 fixed
    auto c = cp::constant();
    auto p = pt(C(0.3, 0.2));
    auto v = evaluate_omega<double>(c, std::span<const C>(p));
    CHECK(std::abs(v[0] - C(1, 0)) < 1e-15);
    CHECK(std::abs(v[1] - C(0, -1)) < 1e-15);
  }
  CHECK_THROWS_AS(
      [&] {
        auto p = pt(C(0.0, 0.0));
        return evaluate_omega<double>(m, std::span<const C>(p));
      }(),
      ModelError);
  CHECK_THROWS_AS(
      [&] {
        auto p = pt(C(0.95, 0.0));
        return evaluate_omega<double>(m, std::span<const C>(p));
      }(),
      ModelError);
}

TEST_CASE("omega series agrees with the matrix exponential") {
  for (const auto& m : {cp::elliptic(), cp::weight3(), cp::product()}) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rad(-8.0, -2.0), ang(-3.1, 3.1);
    for (int t = 0; t < 20; ++t) {
      std::vector<C> z(m.vars());
      for (int i = 0; i < m.vars(); ++i) z[i] = std::polar(std::exp(rad(rng)), ang(rng));
      auto a = evaluate_omega<double>(m, std::span<const C>(z));
      auto b = m.omega_series().eval<double>(std::span<const C>(z));
      for (int p = 0; p < m.rank(); ++p) CHECK(std::abs(a[p] - b[p]) < 1e-12 * (1 + std::abs(a[p])));
    }
  }
}

TEST_CASE("pairing values and sesquilinearity") {
  auto m = cp::elliptic();
  std::vector<C> u{C(1, 0), C(0, 1)};
  CHECK(std::abs(pairing<double>(m, std::span<const C>(u), std::span<const C>(u)) - C(2, 0)) <
        1e-15);

  std::vector<C> a0{C(1, 0), C(0, 0)};  // isotropic
  CHECK(std::abs(pairing<double>(m, std::span<const C>(a0), std::span<const C>(a0))) < 1e-15);

  C c(2, 3);
  std::vector<C> cu{c * u[0], c * u[1]};
  auto lhs = pairing<double>(m, std::span<const C>(cu), std::span<const C>(u));
  auto rhs = c * pairing<double>(m, std::span<const C>(u), std::span<const C>(u));
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("potential values") {
  auto m = cp::elliptic();
  CHECK(pot(m, C(std::exp(-2 * kPi), 0)) == doctest::Approx(2.0).epsilon(1e-13));
  for (double t : {0.5, 1.0, 2.5})
    CHECK(pot(m, C(std::exp(-2 * kPi * t), 0)) == doctest::Approx(2.0 * t).epsilon(1e-13));
  auto c = cp::constant();
  CHECK(pot(c, C(0.3, -0.2)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pot(c, C(0.001, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("potential is single valued across the cut") {
  auto m = cp::weight3();
  for (double r : {1e-3, 1e-6}) {
    double w = std::log(1.0 / r);
    // both boundary branches of log(1/z) at z = -r
    auto omega_branch = [&](double sgn) {
      C L(w, sgn * kPi);
      C tau = C(0, 1) * L / (2 * kPi);
      std::vector<C> v{C(1, 0), tau, tau * tau / 2.0, tau * tau * tau / 6.0};
      return v;
    };
    auto vp = omega_branch(-1), vm = omega_branch(1);
    auto hp = pairing<double>(m, std::span<const C>(vp), std::span<const C>(vp));
    auto hm = pairing<double>(m, std::span<const C>(vm), std::span<const C>(vm));
    CHECK(std::abs(hp - hm) < 1e-12 * std::abs(hp));
  }
}

TEST_CASE("monodromy consistency across the cut") {
  auto m = cp::elliptic();
  double r = 1e-4, w = std::log(1.0 / r);
  auto omega_branch = [&](double sgn) {
    C L(w, sgn * kPi);
    C tau = C(0, 1) * L / (2 * kPi);
    std::vector<C> v{C(1, 0), tau};
    return v;
  };
  auto vp = omega_branch(-1);  // theta -> pi
  auto vm = omega_branch(1);   // theta -> -pi
  // Omega_+ = exp(N) Omega_-, N = [[0,0],[1,0]]
  CHECK(std::abs(vp[0] - vm[0]) < 1e-14);
  CHECK(std::abs(vp[1] - (vm[1] + vm[0])) < 1e-14);
}

TEST_CASE("potential series exact coefficients") {
  {
    auto s = potential_series(cp::elliptic(), 0.0);
    REQUIRE(s.term_count() == 1);
    const auto& [key, coeff] = *s.terms().begin();
    CHECK(key.a[0] == 0);
    CHECK(key.b[0] == 0);
    CHECK(key.l[0] == 1);
    CHECK(coeff == PiPoly(1, GaussRat(1)));  // (1/2pi) * u
  }
  {
    auto s = potential_series(cp::constant(), 0.0);
    REQUIRE(s.term_count() == 1);
    CHECK(s.terms().begin()->second == PiPoly(GaussRat(2)));
  }
  {
    // N = 0, A = A_0 + A_1 z: bilinear pairing terms at (0,0),(1,0),(0,1),(1,1)
    RatMat Q = cp::mat(2, {{0, 1}, {-1, 0}});
    RatMat N = RatMat::zero(2);
    std::vector<CoeffRecord> coeffs{{{0}, cp::gvec({{1, 0}, {0, -1}})},
                                    {{1}, cp::gvec({{0, 0}, {1, 0}})}};
    VHSModel m(1, 2, 1, 1, Q, {N}, coeffs, BigRat(1, 2), {{0.01, 0.0}});
    auto s = potential_series(m, 3.0);
    CHECK(s.term_count() == 4);
    CHECK(s.is_conj_symmetric());
    // numeric agreement with the direct evaluation
    for (C z : {C(0.05, 0.02), C(-0.07, 0.01)}) {
      PointCtx<double> ctx(std::span<const C>(&z, 1), 1);
      auto p = pt(z);
      CHECK(s.eval(ctx).real() ==
            doctest::Approx(potential<double>(m, std::span<const C>(p))).epsilon(1e-12));
    }
  }
}

TEST_CASE("potential series cap and insufficiency error") {
  auto m = cp::elliptic_plus({{1, cp::gvec({{1, 0}, {0, 0}})}}, 1);  // declared exact to order 1
  CHECK_NOTHROW(potential_series(m, 1.0));
  CHECK_THROWS_AS(potential_series(m, 5.0), InsufficientSeriesError);
  try {
    potential_series(m, 5.0);
  } catch (const InsufficientSeriesError& e) {
    CHECK(e.needed_order == 5);
    CHECK(e.available_order == 1);
  }
}

TEST_CASE("truncation error probe") {
  std::vector<double> radii;
  for (int i = 3; i <= 10; ++i) radii.push_back(std::exp(double(-i)));

  SUBCASE("exact model reports exact") {
    auto p = truncation_error_probe(cp::elliptic(), 0.0, 0, radii);
    CHECK(p.exact);
  }
  SUBCASE("everything dropped: error is the section itself") {
    auto p = truncation_error_probe(cp::elliptic(), -1.0, 0, radii);
    CHECK(!p.exact);
    CHECK(p.k0 == 0);
    CHECK(p.l0 == 1);
    CHECK(std::abs(p.khat - 0.0) < 0.05);
    CHECK(std::abs(p.lhat - 1.0) < 0.35);
  }
  SUBCASE("dropped leading term r^2 log(1/r)") {
    auto m = cp::elliptic_plus({{2, cp::gvec({{1, 0}, {0, 0}})}});
    auto p = truncation_error_probe(m, 1.0, 0, radii);
    CHECK(!p.exact);
    CHECK(p.k0 == 2);
    CHECK(p.l0 == 1);
    CHECK(p.khat == doctest::Approx(2.0).epsilon(0.1));
    CHECK(p.lhat == doctest::Approx(1.0).epsilon(0.5));
  }
}

TEST_CASE("jordan-chevalley decomposition") {
  {
    auto d = jordan_chevalley(cp::mat(2, {{1, 1}, {0, 1}}));
    CHECK(d.semisimple == RatMat::identity(2));
    CHECK(d.unipotent == cp::mat(2, {{1, 1}, {0, 1}}));
    CHECK(d.order.value() == 1);
  }
  {
    auto d = jordan_chevalley(cp::mat(2, {{0, -1}, {1, 0}}));
    CHECK(d.semisimple == cp::mat(2, {{0, -1}, {1, 0}}));
    CHECK(d.unipotent == RatMat::identity(2));
    CHECK(d.order.value() == 4);
  }
  {
    auto d = jordan_chevalley(cp::mat(2, {{0, -1}, {1, 1}}));
    CHECK(d.unipotent == RatMat::identity(2));
    CHECK(d.order.value() == 6);
  }
  {
    // diag(2, 1/2): semisimple of infinite order
    RatMat t(2, 2);
    t.at(0, 0) = 2;
    t.at(1, 1) = BigRat(1, 2);
    auto d = jordan_chevalley(t, 500);
    CHECK(!d.order.has_value());
  }
  {
    // mixed: commuting torsion times unipotent on rank 4
    RatMat T = cp::swapblock_torsion() * exp_nilpotent(cp::swapblock().nilpotents()[0]);
    auto d = jordan_chevalley(T);
    CHECK(d.order.value() == 4);
    CHECK(d.semisimple == cp::swapblock_torsion());
    CHECK(d.semisimple * d.unipotent == T);
    CHECK(d.semisimple * d.unipotent == d.unipotent * d.semisimple);
  }
}

TEST_CASE("unipotent reduction") {
  SUBCASE("already unipotent monodromy leaves the model alone") {
    auto m = cp::elliptic();
    auto T = jordan_chevalley(exp_nilpotent(m.nilpotents()[0]));
    auto red = unipotent_reduction(m, {T});
    CHECK(red.nilpotents()[0] == m.nilpotents()[0]);
    CHECK(red.coeffs()[0].powers == m.coeffs()[0].powers);
  }
  SUBCASE("order-4 torsion block") {
    auto m = cp::swapblock();
    RatMat T = cp::swapblock_torsion() * exp_nilpotent(m.nilpotents()[0]);
    auto d = jordan_chevalley(T);
    REQUIRE(d.order.value() == 4);
    auto red = unipotent_reduction(m, {d});
    // new monodromy T^4 is unipotent with logarithm 4N
    RatMat t4 = T.pow(4);
    CHECK(log_unipotent(t4) == m.nilpotents()[0].scaled(BigRat(4)));
    CHECK(red.nilpotents()[0] == m.nilpotents()[0].scaled(BigRat(4)));
    // potential pullback at w with w^4 = e^{-2 pi}
    double w = std::exp(-kPi / 2);
    CHECK(pot(red, C(w, 0)) == doctest::Approx(pot(m, C(std::exp(-2 * kPi), 0))).epsilon(1e-10));
  }
  SUBCASE("potential pullback at random points") {
    auto m = cp::swapblock();
    RatMat T = cp::swapblock_torsion() * exp_nilpotent(m.nilpotents()[0]);
    auto red = unipotent_reduction(m, {jordan_chevalley(T)});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rad(-6.0, -2.0), ang(-0.7, 0.7);
    for (int t = 0; t < 100; ++t) {
      C w = std::polar(std::exp(rad(rng)), ang(rng));
      C z = w * w * w * w;
      CHECK(pot(red, w) == doctest::Approx(pot(m, z)).epsilon(1e-10));
    }
  }
  SUBCASE("infinite order is an error") {
    RatMat t(2, 2);
    t.at(0, 0) = 2;
    t.at(1, 1) = BigRat(1, 2);
    auto d = jordan_chevalley(t, 100);
    CHECK_THROWS_AS(unipotent_reduction(cp::elliptic(), {d}), ModelError);
  }
}

TEST_CASE("untwist check") {
  auto rep = untwist_check(cp::elliptic(), 8);
  CHECK(rep.single_valued);
  CHECK(rep.bounded);

  auto repc = untwist_check(cp::constant(), 8);
  CHECK(repc.single_valued);

  // wrong untwisting operator: branch mismatch of order of the perturbation
  RatMat pert = cp::mat(2, {{0, 0}, {1, 0}});
  pert.at(1, 0) = BigRat(1001, 1000);
  std::vector<RatMat> alt{pert};
  auto repb = untwist_check(cp::elliptic(), 8, &alt);
  CHECK(!repb.single_valued);
  CHECK(repb.max_cut_residual > 1e-5);
}

TEST_CASE("random corpus validates") {
  auto models = cp::random_corpus(6, 42);
  CHECK(models.size() == 6);
  for (const auto& m : models) CHECK(validate(m).all_passed());
}
