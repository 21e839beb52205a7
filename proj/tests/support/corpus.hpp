#pragma once

// Shared model builders for the test suites: small weight-1/weight-3 orbit
// data with exactly known potentials, plus a seeded generator of random valid
// models for property sweeps.

#include <optional>
#include <random>

#include "wpg/model.hpp"

namespace wpg::corpus {

inline RatMat mat(int n, std::initializer_list<std::initializer_list<long>> rows) {
  RatMat m(n, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long v : r) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

inline std::vector<GaussRat> gvec(std::initializer_list<std::pair<long, long>> entries) {
  std::vector<GaussRat> v;
  for (const auto& [re, im] : entries) v.push_back(GaussRat(BigRat(re), BigRat(im)));
  return v;
}

// Weight 1, rank 2: Omega = (1, tau), potential 2 Im tau = log(1/r)/pi.
inline VHSModel elliptic() {
  RatMat Q = mat(2, {{0, 1}, {-1, 0}});
  RatMat N = mat(2, {{0, 0}, {1, 0}});
  std::vector<CoeffRecord> coeffs{{{0}, gvec({{1, 0}, {0, 0}})}};
  return VHSModel(1, 2, 1, 1, Q, {N}, coeffs, BigRat(9, 10), {{0.01, 0.0}});
}

// Same structure with extra holomorphic terms A_0 + sum A_d z^d.
inline VHSModel elliptic_plus(std::initializer_list<std::pair<int, std::vector<GaussRat>>> extra,
                              std::optional<int> truncated_at = std::nullopt) {
  RatMat Q = mat(2, {{0, 1}, {-1, 0}});
  RatMat N = mat(2, {{0, 0}, {1, 0}});
  std::vector<CoeffRecord> coeffs{{{0}, gvec({{1, 0}, {0, 0}})}};
  for (const auto& [d, v] : extra) coeffs.push_back({{d}, v});
  return VHSModel(1, 2, 1, 1, Q, {N}, coeffs, BigRat(1, 2), {{0.01, 0.0}}, truncated_at);
}

// Flat weight-1 model: N = 0, constant potential 2.
inline VHSModel constant() {
  RatMat Q = mat(2, {{0, 1}, {-1, 0}});
  RatMat N = RatMat::zero(2);
  std::vector<CoeffRecord> coeffs{{{0}, gvec({{1, 0}, {0, -1}})}};
  return VHSModel(1, 2, 1, 1, Q, {N}, coeffs, BigRat(9, 10), {{0.01, 0.0}});
}

// Weight 3, rank 4, one Jordan block: Omega = (1, tau, tau^2/2, tau^3/6),
// potential (4/3) (Im tau)^3.
inline VHSModel weight3() {
  RatMat Q = mat(4, {{0, 0, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}});
  RatMat N(4, 4);
  N.at(1, 0) = 1;
  N.at(2, 1) = 1;
  N.at(3, 2) = 1;
  std::vector<CoeffRecord> coeffs{{{0}, gvec({{1, 0}, {0, 0}, {0, 0}, {0, 0}})}};
  return VHSModel(3, 4, 1, 1, Q, {N}, coeffs, BigRat(1, 2), {{0.01, 0.0}});
}

// Weight 3 with a perturbed constant section (still an exact orbit).
inline VHSModel weight3_perturbed(const BigRat& a, const BigRat& b) {
  RatMat Q = mat(4, {{0, 0, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}});
  RatMat N(4, 4);
  N.at(1, 0) = 1;
  N.at(2, 1) = 1;
  N.at(3, 2) = 1;
  std::vector<GaussRat> a0(4);
  a0[0] = GaussRat(BigRat(1));
  a0[1] = GaussRat(a);
  a0[2] = GaussRat(b);
  std::vector<CoeffRecord> coeffs{{{0}, a0}};
  return VHSModel(3, 4, 1, 1, Q, {N}, coeffs, BigRat(1, 2), {{0.01, 0.0}});
}

// Two independent weight-1 factors: weight 2, rank 4, two punctures.
inline VHSModel product() {
  RatMat Q = mat(4, {{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}});
  RatMat N1(4, 4), N2(4, 4);
  N1.at(2, 0) = 1;
  N1.at(3, 1) = 1;
  N2.at(1, 0) = 1;
  N2.at(3, 2) = 1;
  std::vector<CoeffRecord> coeffs{{{0, 0}, gvec({{1, 0}, {0, 0}, {0, 0}, {0, 0}})}};
  return VHSModel(2, 4, 2, 2, Q, {N1, N2}, coeffs, BigRat(1, 2), {{0.01, 0.0}, {0.01, 0.0}});
}

// Weight 1, rank 4 = two elliptic blocks sharing one variable, with a
// block-swap torsion monodromy of order 4 on top of the unipotent part.
inline VHSModel swapblock() {
  RatMat Q(4, 4);
  Q.at(0, 1) = 1;
  Q.at(1, 0) = -1;
  Q.at(2, 3) = 1;
  Q.at(3, 2) = -1;
  RatMat N(4, 4);
  N.at(1, 0) = 1;
  N.at(3, 2) = 1;
  std::vector<CoeffRecord> coeffs{{{0}, gvec({{1, 0}, {0, 0}, {1, 0}, {0, 0}})}};
  return VHSModel(1, 4, 1, 1, Q, {N}, coeffs, BigRat(9, 10), {{0.01, 0.0}});
}

inline RatMat swapblock_torsion() {
  RatMat g(4, 4);
  g.at(0, 2) = -1;
  g.at(1, 3) = -1;
  g.at(2, 0) = 1;
  g.at(3, 1) = 1;
  return g;
}

// Seeded generator of random valid models across the three families.
// Draws are retried until validate() passes and the metric is positive
// definite at a couple of sample radii (checked by the caller's tests).
inline std::vector<VHSModel> random_corpus(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto small_rat = [&](int maxnum, int maxden) {
    std::uniform_int_distribution<int> num(-maxnum, maxnum);
    std::uniform_int_distribution<int> den(1, maxden);
    return BigRat(num(rng), den(rng));
  };
  std::vector<VHSModel> out;
  int family = 0;
  while (static_cast<int>(out.size()) < count) {
    try {
      if (family % 3 == 0) {
        std::vector<GaussRat> a1{GaussRat(small_rat(2, 4), small_rat(2, 4)),
                                 GaussRat(small_rat(2, 4), small_rat(2, 4))};
        std::vector<GaussRat> a2{GaussRat(small_rat(1, 4), small_rat(1, 4)),
                                 GaussRat(small_rat(1, 4), small_rat(1, 4))};
        RatMat Q = mat(2, {{0, 1}, {-1, 0}});
        RatMat N = mat(2, {{0, 0}, {1, 0}});
        std::vector<CoeffRecord> coeffs{
            {{0}, gvec({{1, 0}, {0, 0}})}, {{1}, a1}, {{2}, a2}};
        VHSModel m(1, 2, 1, 1, Q, {N}, coeffs, BigRat(1, 8), {{0.005, 0.0}});
        if (validate(m).all_passed()) out.push_back(std::move(m));
      } else if (family % 3 == 1) {
        VHSModel m = weight3_perturbed(small_rat(1, 8), small_rat(1, 8));
        if (validate(m).all_passed()) out.push_back(std::move(m));
      } else {
        out.push_back(product());
      }
    } catch (const ModelError&) {
      // draw again
    }
    ++family;
  }
  return out;
}

}  // namespace wpg::corpus
