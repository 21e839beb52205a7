#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpg/ratmat.hpp"
#include "wpg/series.hpp"

namespace wpg {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositivityError : ModelError {
  PositivityError(const std::string& msg, std::vector<std::complex<double>> pt)
      : ModelError(msg), point(std::move(pt)) {}
  std::vector<std::complex<double>> point;
};

struct InsufficientSeriesError : ModelError {
  InsufficientSeriesError(const std::string& msg, int needed, int available)
      : ModelError(msg), needed_order(needed), available_order(available) {}
  int needed_order, available_order;
};

struct PolarizationForm {
  int weight = 0;  // n
  int dim = 0;     // b
  RatMat Q;
};

struct NilpotentFamily {
  std::vector<RatMat> ops;
  int weight = 0;
};

// T = semisimple * unipotent, commuting; order is the least power sending the
// semisimple part to the identity, or nullopt when none below the search bound.
struct MonodromyOperator {
  RatMat T;
  RatMat semisimple;
  RatMat unipotent;
  std::optional<long> order;
};

struct CoeffRecord {
  std::vector<int> powers;       // size m, all >= 0
  std::vector<GaussRat> value;   // size b
};

// Local nilpotent-orbit data on (punctured disk)^k x disk^(m-k):
//   Omega(z) = exp((i/2pi) sum_j N_j log(1/z_j)) * A(z).
class VHSModel {
 public:
  VHSModel(int weight, int rank, int vars, int punctures, RatMat Q,
           std::vector<RatMat> nilpotents, std::vector<CoeffRecord> coeffs,
           BigRat radius, std::vector<std::complex<double>> base_point,
           std::optional<int> truncated_at = std::nullopt,
           std::vector<RatMat> monodromies = {});

  int weight() const { return n_; }
  int rank() const { return b_; }
  int vars() const { return m_; }
  int punctures() const { return k_; }
  const RatMat& Q() const { return Q_; }
  const std::vector<RatMat>& nilpotents() const { return N_; }
  const std::vector<CoeffRecord>& coeffs() const { return a_; }
  const BigRat& radius() const { return radius_; }
  const std::vector<std::complex<double>>& base_point() const { return base_; }
  int pairing_sign() const { return sign_; }
  std::optional<int> truncated_at() const { return truncated_at_; }
  bool has_monodromies() const { return !T_.empty(); }
  // Stored monodromy operator, defaulting to exp(N_j) when none was supplied.
  RatMat monodromy(int j) const;

  // Exact expansion of Omega in z^alpha (log 1/z)^l.
  const OmegaSeries& omega_series() const { return omega_; }
  // Exact expansion of (Omega, conj Omega) in z^a conj(z)^b u^l.
  const PotSeries& potential_series_full() const { return pot_; }

  void require_in_domain(std::span<const std::complex<double>> z) const;

 private:
  int n_, b_, m_, k_;
  RatMat Q_;
  std::vector<RatMat> N_;
  std::vector<CoeffRecord> a_;
  BigRat radius_;
  std::vector<std::complex<double>> base_;
  std::optional<int> truncated_at_;
  std::vector<RatMat> T_;
  int sign_ = 1;
  OmegaSeries omega_;
  PotSeries pot_;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

ValidationReport validate(const VHSModel& model);

template <class Real>
using CVec = std::vector<std::complex<Real>>;

// Omega(z) by the finite matrix exponential (independent of omega_series).
template <class Real>
CVec<Real> evaluate_omega(const VHSModel& model, std::span<const std::complex<Real>> z);

// s * i^n * u^T Q conj(v).
template <class Real>
std::complex<Real> pairing(const VHSModel& model, std::span<const std::complex<Real>> u,
                           std::span<const std::complex<Real>> v);

// (Omega, conj Omega), checked real and positive.
template <class Real>
Real potential(const VHSModel& model, std::span<const std::complex<Real>> z);

// Expansion of the potential with all per-puncture-variable degrees
// s+t-l/(m*n+1) <= cap.  Errors when the declared truncation order of the
// holomorphic part cannot support the request.
PotSeries potential_series(const VHSModel& model, double cap);

struct TruncationProbe {
  bool exact = false;
  double khat = 0, lhat = 0;
  double max_error = 0;
  int k0 = 0, l0 = 0;
};

// Measures the C^s truncation error on circles and fits
// log E = c + k log r + l log log(1/r).
TruncationProbe truncation_error_probe(const VHSModel& model, double mu, int s,
                                       const std::vector<double>& radii);

MonodromyOperator jordan_chevalley(const RatMat& T, long order_bound = 10000);

VHSModel unipotent_reduction(const VHSModel& model,
                             const std::vector<MonodromyOperator>& monodromies);

struct UntwistReport {
  bool single_valued = false;
  bool bounded = false;
  double max_cut_residual = 0;   // relative mismatch across the branch cut
  double max_growth_ratio = 0;   // |psi| ratio between successive radii
};

UntwistReport untwist_check(const VHSModel& model, int sample_count,
                            const std::vector<RatMat>* untwist_nilpotents = nullptr);

// Memoized exact partial derivatives of the potential series, up to the given
// holomorphic/antiholomorphic orders.  Built once, then shared read-only.
class PotentialJet {
 public:
  PotentialJet(const VHSModel& model, int max_dz, int max_dzbar);

  int vars() const { return m_; }
  int punctures() const { return k_; }

  const PotSeries& series(const std::vector<int>& da, const std::vector<int>& db) const;

  template <class Real>
  struct Values {
    const PotentialJet* jet;
    std::vector<std::complex<Real>> v;
    std::complex<Real> get(const std::vector<int>& da, const std::vector<int>& db) const {
      return v[jet->index(da, db)];
    }
  };

  template <class Real>
  Values<Real> eval(std::span<const std::complex<Real>> z) const {
    PointCtx<Real> ctx(z, k_);
    Values<Real> out;
    out.jet = this;
    out.v.resize(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i) out.v[i] = entries_[i].s.eval(ctx);
    return out;
  }

  size_t index(const std::vector<int>& da, const std::vector<int>& db) const;

 private:
  struct Entry {
    std::vector<int> da, db;
    PotSeries s;
  };
  int m_, k_;
  std::vector<Entry> entries_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, size_t> idx_;
};

// Partial derivatives of omega_series up to the given total order, for
// flag construction.
class OmegaJet {
 public:
  OmegaJet(const VHSModel& model, int max_total_order);
  const OmegaSeries& series(const std::vector<int>& d) const;
  const std::vector<std::vector<int>>& orders() const { return orders_; }

 private:
  std::map<std::vector<int>, OmegaSeries> jets_;
  std::vector<std::vector<int>> orders_;
};

std::vector<std::vector<int>> multi_indices_up_to(int vars, int total);

}  // namespace wpg
