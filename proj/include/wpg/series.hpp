#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wpg/bigrat.hpp"

namespace wpg {

// Shared point-evaluation context: caches powers of z_i, conj(z_i) and of the
// real logs u_i = log(1/r_i^2) so that evaluating many series at one point
// does not recompute them.
template <class Real>
struct PointCtx {
  using C = std::complex<Real>;
  std::vector<C> z;        // size m
  std::vector<Real> u;     // size k, u_j = log(1/|z_j|^2)
  int punctures = 0;

  explicit PointCtx(std::span<const C> pt, int k) : z(pt.begin(), pt.end()), punctures(k) {
    u.resize(k);
    for (int j = 0; j < k; ++j) u[j] = -std::log(std::norm(z[j]));
  }

  C zpow(int i, int e) const { return ipow(z[i], e); }
  C zbarpow(int i, int e) const { return ipow(std::conj(z[i]), e); }
  Real upow(int j, int e) const {
    Real r = 1;
    for (int t = 0; t < e; ++t) r *= u[j];
    return r;
  }

 private:
  static C ipow(C b, int e) {
    if (e < 0) return C(1) / ipow(b, -e);
    C r(1);
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }
};

// Real bigraded log series: sum of  c * z^a * conj(z)^b * prod_j u_j^{l_j},
// u_j = log(1/r_j^2).  Exponents a,b may go negative under differentiation;
// log exponents stay nonnegative.  Coefficients live in Q(i)[1/(2*pi)].
class PotSeries {
 public:
  struct Key {
    std::vector<int> a, b, l;
    auto operator<=>(const Key&) const = default;
  };

  PotSeries() = default;
  PotSeries(int vars, int punctures) : m_(vars), k_(punctures) {}

  int vars() const { return m_; }
  int punctures() const { return k_; }
  bool empty() const { return t_.empty(); }
  size_t term_count() const { return t_.size(); }
  const std::map<Key, PiPoly>& terms() const { return t_; }

  void add_term(Key key, PiPoly coeff);

  PotSeries operator+(const PotSeries& o) const;
  PotSeries operator-(const PotSeries& o) const;
  PotSeries operator*(const PotSeries& o) const;
  PotSeries operator-() const;
  PotSeries scaled(const PiPoly& c) const;
  PotSeries conj() const;

  // d/dz_i and d/dconj(z_i); the log variables obey du_j/dz_j = -1/z_j.
  PotSeries dz(int i) const;
  PotSeries dzbar(int i) const;

  // Multiply by z_i^p * conj(z_i)^q (exponent shift).
  PotSeries shifted(int i, int p, int q) const;

  template <class Real>
  std::complex<Real> eval(const PointCtx<Real>& ctx) const {
    std::complex<Real> acc{};
    for (const auto& [key, coeff] : t_) {
      std::complex<Real> term = coeff.template value<Real>();
      for (int i = 0; i < m_; ++i) {
        if (key.a[i]) term *= ctx.zpow(i, key.a[i]);
        if (key.b[i]) term *= ctx.zbarpow(i, key.b[i]);
      }
      for (int j = 0; j < k_; ++j)
        if (key.l[j]) term *= ctx.upow(j, key.l[j]);
      acc += term;
    }
    return acc;
  }

  // True if coefficients satisfy c(a,b,l) == conj(c(b,a,l)) (a real series).
  bool is_conj_symmetric() const;

  int max_log_power(int j) const;

 private:
  int m_ = 0, k_ = 0;
  std::map<Key, PiPoly> t_;
};

// Vector-valued holomorphic log series:
//   sum over (alpha, l) of  C[alpha,l] * z^alpha * prod_j L_j^{l_j},
// L_j = log(1/z_j) principal branch.  This is the local normal form of a
// flat section near the divisor; power exponents may go negative under
// differentiation.
class OmegaSeries {
 public:
  struct Key {
    std::vector<int> alpha, l;
    auto operator<=>(const Key&) const = default;
  };

  OmegaSeries() = default;
  OmegaSeries(int vars, int punctures, int dim) : m_(vars), k_(punctures), b_(dim) {}

  int vars() const { return m_; }
  int punctures() const { return k_; }
  int dim() const { return b_; }
  bool empty() const { return t_.empty(); }
  const std::map<Key, std::vector<PiPoly>>& terms() const { return t_; }

  void add_term(Key key, std::vector<PiPoly> coeff);

  OmegaSeries operator-(const OmegaSeries& o) const;
  OmegaSeries dz(int i) const;

  // z_j -> w^mj, for puncture base change.
  OmegaSeries power_substituted(int j, int mj) const;

  template <class Real>
  std::vector<std::complex<Real>> eval(std::span<const std::complex<Real>> z) const {
    using C = std::complex<Real>;
    std::vector<C> logs(k_);
    for (int j = 0; j < k_; ++j) logs[j] = -std::log(z[j]);
    std::vector<C> acc(b_);
    for (const auto& [key, coeff] : t_) {
      C scal(1);
      for (int i = 0; i < m_; ++i)
        for (int t = 0; t < key.alpha[i]; ++t) scal *= z[i];
      for (int i = 0; i < m_; ++i)
        for (int t = 0; t > key.alpha[i]; --t) scal /= z[i];
      for (int j = 0; j < k_; ++j)
        for (int t = 0; t < key.l[j]; ++t) scal *= logs[j];
      for (int p = 0; p < b_; ++p) acc[p] += scal * coeff[p].template value<Real>();
    }
    return acc;
  }

 private:
  int m_ = 0, k_ = 0, b_ = 0;
  std::map<Key, std::vector<PiPoly>> t_;
};

// Degree of the basis function z^k (log 1/z)^l in one puncture variable,
// with denominator parameter d (weight-dependent):  k - l/d.
inline BigRat term_degree(int k, int l, int denom) {
  return BigRat(k) - BigRat(l, denom);
}

struct TruncateResult {
  OmegaSeries kept;
  // Minimal-degree exponent pair above the cut: the unique (k0,l0) with
  // l0 <= n and k0 - l0/(n+1) > mu minimal among all such pairs.
  int k0 = 0, l0 = 0;
};

// Keeps exactly the terms whose degree in puncture variable `var` is <= mu.
TruncateResult truncate_series(const OmegaSeries& s, double mu, int var, int weight);

}  // namespace wpg
