#include "wpg/series.hpp"

#include <stdexcept>

namespace wpg {

void PotSeries::add_term(Key key, PiPoly coeff) {
  if (coeff.is_zero()) return;
  auto [it, fresh] = t_.emplace(std::move(key), std::move(coeff));
  if (!fresh) {
    it->second += coeff;
    if (it->second.is_zero()) t_.erase(it);
  }
}

PotSeries PotSeries::operator+(const PotSeries& o) const {
  PotSeries r = *this;
  for (const auto& [k, c] : o.t_) r.add_term(k, c);
  return r;
}

PotSeries PotSeries::operator-(const PotSeries& o) const { return *this + (-o); }

PotSeries PotSeries::operator-() const {
  PotSeries r(m_, k_);
  for (const auto& [k, c] : t_) r.t_[k] = -c;
  return r;
}

PotSeries PotSeries::operator*(const PotSeries& o) const {
  PotSeries r(m_, k_);
  for (const auto& [ka, ca] : t_)
    for (const auto& [kb, cb] : o.t_) {
      Key k = ka;
      for (int i = 0; i < m_; ++i) {
        k.a[i] += kb.a[i];
        k.b[i] += kb.b[i];
      }
      for (int j = 0; j < k_; ++j) k.l[j] += kb.l[j];
      r.add_term(std::move(k), ca * cb);
    }
  return r;
}

PotSeries PotSeries::scaled(const PiPoly& c) const {
  PotSeries r(m_, k_);
  for (const auto& [k, v] : t_) {
    PiPoly p = v * c;
    if (!p.is_zero()) r.t_[k] = std::move(p);
  }
  return r;
}

PotSeries PotSeries::conj() const {
  PotSeries r(m_, k_);
  for (const auto& [k, v] : t_) {
    Key kk = k;
    std::swap(kk.a, kk.b);
    r.t_[kk] = v.conj();
  }
  return r;
}

PotSeries PotSeries::dz(int i) const {
  PotSeries r(m_, k_);
  for (const auto& [k, c] : t_) {
    if (k.a[i] != 0) {
      Key kk = k;
      kk.a[i] -= 1;
      r.add_term(std::move(kk), c.scaled(GaussRat(k.a[i])));
    }
    if (i < k_ && k.l[i] > 0) {
      Key kk = k;
      kk.a[i] -= 1;
      kk.l[i] -= 1;
      r.add_term(std::move(kk), c.scaled(GaussRat(-k.l[i])));
    }
  }
  return r;
}

PotSeries PotSeries::dzbar(int i) const {
  PotSeries r(m_, k_);
  for (const auto& [k, c] : t_) {
    if (k.b[i] != 0) {
      Key kk = k;
      kk.b[i] -= 1;
      r.add_term(std::move(kk), c.scaled(GaussRat(k.b[i])));
    }
    if (i < k_ && k.l[i] > 0) {
      Key kk = k;
      kk.b[i] -= 1;
      kk.l[i] -= 1;
      r.add_term(std::move(kk), c.scaled(GaussRat(-k.l[i])));
    }
  }
  return r;
}

PotSeries PotSeries::shifted(int i, int p, int q) const {
  PotSeries r(m_, k_);
  for (const auto& [k, c] : t_) {
    Key kk = k;
    kk.a[i] += p;
    kk.b[i] += q;
    r.t_[kk] = c;
  }
  return r;
}

bool PotSeries::is_conj_symmetric() const {
  for (const auto& [k, c] : t_) {
    Key kk = k;
    std::swap(kk.a, kk.b);
    auto it = t_.find(kk);
    if (it == t_.end()) return false;
    if (!(it->second == c.conj())) return false;
  }
  return true;
}

int PotSeries::max_log_power(int j) const {
  int mx = 0;
  for (const auto& [k, c] : t_) mx = std::max(mx, k.l[j]);
  return mx;
}

void OmegaSeries::add_term(Key key, std::vector<PiPoly> coeff) {
  bool all_zero = true;
  for (const auto& c : coeff)
    if (!c.is_zero()) {
      all_zero = false;
      break;
    }
  if (all_zero) return;
  auto [it, fresh] = t_.emplace(std::move(key), std::move(coeff));
  if (!fresh) {
    bool nonzero = false;
    for (int p = 0; p < b_; ++p) {
      it->second[p] += coeff[p];
      if (!it->second[p].is_zero()) nonzero = true;
    }
    if (!nonzero) t_.erase(it);
  }
}

OmegaSeries OmegaSeries::operator-(const OmegaSeries& o) const {
  OmegaSeries r = *this;
  for (const auto& [k, v] : o.t_) {
    std::vector<PiPoly> neg(b_);
    for (int p = 0; p < b_; ++p) neg[p] = -v[p];
    r.add_term(k, std::move(neg));
  }
  return r;
}

OmegaSeries OmegaSeries::dz(int i) const {
  OmegaSeries r(m_, k_, b_);
  for (const auto& [k, v] : t_) {
    if (k.alpha[i] != 0) {
      Key kk = k;
      kk.alpha[i] -= 1;
      std::vector<PiPoly> c(b_);
      for (int p = 0; p < b_; ++p) c[p] = v[p].scaled(GaussRat(k.alpha[i]));
      r.add_term(std::move(kk), std::move(c));
    }
    if (i < k_ && k.l[i] > 0) {
      Key kk = k;
      kk.alpha[i] -= 1;
      kk.l[i] -= 1;
      std::vector<PiPoly> c(b_);
      for (int p = 0; p < b_; ++p) c[p] = v[p].scaled(GaussRat(-k.l[i]));
      r.add_term(std::move(kk), std::move(c));
    }
  }
  return r;
}

OmegaSeries OmegaSeries::power_substituted(int j, int mj) const {
  OmegaSeries r(m_, k_, b_);
  for (const auto& [k, v] : t_) {
    Key kk = k;
    kk.alpha[j] *= mj;
    std::vector<PiPoly> c(b_);
    BigRat scale = 1;
    // (log 1/z_j)^l picks up m_j^l under z_j = w^{m_j}.
    for (int t = 0; t < k.l[j]; ++t) scale *= mj;
    for (int p = 0; p < b_; ++p) c[p] = v[p].scaled(GaussRat(scale));
    r.add_term(std::move(kk), std::move(c));
  }
  return r;
}

TruncateResult truncate_series(const OmegaSeries& s, double mu, int var, int weight) {
  TruncateResult res;
  res.kept = OmegaSeries(s.vars(), s.punctures(), s.dim());
  const int denom = weight + 1;
  for (const auto& [k, v] : s.terms()) {
    double deg = k.alpha[var] - double(k.l[var]) / denom;
    if (deg <= mu + 1e-12) res.kept.add_term(k, v);
  }
  // Minimal degree strictly above mu over all pairs with l <= weight.
  double best = 0;
  bool have = false;
  for (int l = 0; l <= weight; ++l) {
    // smallest k with k - l/denom > mu
    int kk = static_cast<int>(std::floor(mu + double(l) / denom)) + 1;
    while (kk - double(l) / denom <= mu + 1e-12) ++kk;
    if (kk < 0) kk = 0;
    double deg = kk - double(l) / denom;
    if (!have || deg < best - 1e-12) {
      best = deg;
      have = true;
      res.k0 = kk;
      res.l0 = l;
    }
  }
  return res;
}

}  // namespace wpg
