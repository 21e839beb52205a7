#include "wpg/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace wpg {

namespace {

// All l in [0..cap]^k.
std::vector<std::vector<int>> log_indices(int k, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  while (true) {
    out.push_back(cur);
    int j = 0;
    while (j < k && cur[j] == cap) {
      cur[j] = 0;
      ++j;
    }
    if (j == k) break;
    ++cur[j];
  }
  if (k == 0) out = {{}};
  return out;
}

BigRat factorial(int n) {
  BigRat f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<GaussRat> conj_vec(const std::vector<GaussRat>& v) {
  std::vector<GaussRat> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].conj();
  return r;
}

GaussRat dot_unconj(const std::vector<GaussRat>& u, const std::vector<GaussRat>& v) {
  GaussRat acc;
  for (size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

bool vec_is_zero(const std::vector<GaussRat>& v) {
  for (const auto& c : v)
    if (!c.is_zero()) return false;
  return true;
}

OmegaSeries build_omega_series(int n, int b, int m, int k, const std::vector<RatMat>& N,
                               const std::vector<CoeffRecord>& coeffs) {
  OmegaSeries s(m, k, b);
  auto ls = log_indices(k, n);
  for (const auto& rec : coeffs) {
    for (const auto& l : ls) {
      std::vector<GaussRat> v = rec.value;
      long total = 0;
      BigRat fact = 1;
      for (int j = 0; j < k; ++j) {
        for (int t = 0; t < l[j]; ++t) v = N[j].apply(v);
        total += l[j];
        fact *= factorial(l[j]);
      }
      if (vec_is_zero(v)) continue;
      GaussRat unit = gauss_i_pow(total) * GaussRat(BigRat(1) / fact);
      std::vector<PiPoly> c(b);
      for (int p = 0; p < b; ++p)
        c[p] = PiPoly(static_cast<int>(total), v[p] * unit);
      OmegaSeries::Key key{rec.powers, l};
      s.add_term(std::move(key), std::move(c));
    }
  }
  return s;
}

PotSeries build_potential_series(int n, int m, int k, int sign, const RatMat& Q,
                                 const std::vector<RatMat>& N,
                                 const std::vector<CoeffRecord>& coeffs) {
  PotSeries s(m, k);
  auto ls = log_indices(k, n);
  for (const auto& rb : coeffs) {
    std::vector<GaussRat> vb = conj_vec(rb.value);
    for (const auto& l : ls) {
      std::vector<GaussRat> w = vb;
      long total = 0;
      BigRat fact = 1;
      for (int j = 0; j < k; ++j) {
        for (int t = 0; t < l[j]; ++t) w = N[j].apply(w);
        total += l[j];
        fact *= factorial(l[j]);
      }
      if (vec_is_zero(w)) continue;
      w = Q.apply(w);
      // s * i^n * (-i)^|l| / prod l_j! * x^|l|
      GaussRat unit = gauss_i_pow(n) * gauss_i_pow(-total) * GaussRat(BigRat(sign) / fact);
      for (const auto& ra : coeffs) {
        GaussRat c = dot_unconj(ra.value, w) * unit;
        if (c.is_zero()) continue;
        PotSeries::Key key{ra.powers, rb.powers, l};
        s.add_term(std::move(key), PiPoly(static_cast<int>(total), c));
      }
    }
  }
  return s;
}

}  // namespace

VHSModel::VHSModel(int weight, int rank, int vars, int punctures, RatMat Q,
                   std::vector<RatMat> nilpotents, std::vector<CoeffRecord> coeffs,
                   BigRat radius, std::vector<std::complex<double>> base_point,
                   std::optional<int> truncated_at, std::vector<RatMat> monodromies)
    : n_(weight),
      b_(rank),
      m_(vars),
      k_(punctures),
      Q_(std::move(Q)),
      N_(std::move(nilpotents)),
      a_(std::move(coeffs)),
      radius_(std::move(radius)),
      base_(std::move(base_point)),
      truncated_at_(truncated_at),
      T_(std::move(monodromies)) {
  if (static_cast<int>(N_.size()) != k_) throw ModelError("expected one nilpotent per puncture");
  if (static_cast<int>(base_.size()) != m_) throw ModelError("base point dimension mismatch");
  if (!T_.empty() && static_cast<int>(T_.size()) != k_)
    throw ModelError("expected one monodromy operator per puncture");
  omega_ = build_omega_series(n_, b_, m_, k_, N_, a_);

  // Fix the pairing sign by positivity at the base point.
  sign_ = 1;
  pot_ = build_potential_series(n_, m_, k_, sign_, Q_, N_, a_);
  PointCtx<double> ctx(std::span<const std::complex<double>>(base_), k_);
  std::complex<double> v = pot_.eval(ctx);
  double scale = std::abs(v);
  if (scale == 0.0) throw ModelError("potential vanishes at base point");
  if (std::abs(v.imag()) > 1e-12 * scale)
    throw ModelError("pairing at base point is not real; inconsistent polarization data");
  if (v.real() < 0) {
    sign_ = -1;
    pot_ = build_potential_series(n_, m_, k_, sign_, Q_, N_, a_);
  }
}

RatMat VHSModel::monodromy(int j) const {
  if (!T_.empty()) return T_[j];
  return exp_nilpotent(N_[j]);
}

void VHSModel::require_in_domain(std::span<const std::complex<double>> z) const {
  double delta = to_double(radius_);
  for (int i = 0; i < m_; ++i) {
    double r = std::abs(z[i]);
    if (i < k_ && r == 0.0) throw ModelError("zero coordinate at puncture variable");
    if (r >= delta) {
      std::ostringstream os;
      os << "point outside convergence radius: |z_" << i << "| = " << r << " >= " << delta;
      throw ModelError(os.str());
    }
  }
}

ValidationReport validate(const VHSModel& model) {
  ValidationReport rep;
  auto push = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };
  const int n = model.weight();
  const RatMat& Q = model.Q();

  {
    RatMat want = (n % 2 == 0) ? Q.transpose() : Q.transpose().scaled(BigRat(-1));
    bool ok = (want == Q);
    push("polarization parity Q^T = (-1)^n Q", ok,
         ok ? "" : "transpose parity violated for weight " + std::to_string(n));
  }
  {
    BigRat d = Q.det();
    push("polarization nondegenerate", d != 0, d != 0 ? "" : "det Q = 0");
  }
  for (size_t j = 0; j < model.nilpotents().size(); ++j) {
    const RatMat& N = model.nilpotents()[j];
    RatMat p = N.pow(static_cast<unsigned long>(n) + 1);
    bool ok = p.is_zero();
    push("nilpotency N_" + std::to_string(j + 1) + "^{n+1} = 0", ok,
         ok ? "" : "N^{n+1} has a nonzero entry");
  }
  for (size_t i = 0; i < model.nilpotents().size(); ++i)
    for (size_t j = i + 1; j < model.nilpotents().size(); ++j) {
      const RatMat& A = model.nilpotents()[i];
      const RatMat& B = model.nilpotents()[j];
      bool ok = (A * B == B * A);
      push("commutation [N_" + std::to_string(i + 1) + ", N_" + std::to_string(j + 1) + "] = 0",
           ok, ok ? "" : "nilpotent logarithms do not commute");
    }
  for (size_t j = 0; j < model.nilpotents().size(); ++j) {
    const RatMat& N = model.nilpotents()[j];
    RatMat s = N.transpose() * Q + Q * N;
    bool ok = s.is_zero();
    std::string detail;
    if (!ok) {
      std::ostringstream os;
      os << "N^T Q + Q N != 0; entry (0,0) = " << rat_to_string(s.at(0, 0));
      detail = os.str();
    }
    push("infinitesimal isometry N_" + std::to_string(j + 1) + "^T Q + Q N_" + std::to_string(j + 1) +
             " = 0",
         ok, detail);
  }
  {
    bool found = false, nonzero = false;
    for (const auto& rec : model.coeffs()) {
      bool zerop = std::all_of(rec.powers.begin(), rec.powers.end(), [](int p) { return p == 0; });
      if (zerop) {
        found = true;
        nonzero = !vec_is_zero(rec.value);
      }
    }
    push("leading coefficient A(0) != 0", found && nonzero,
         found ? (nonzero ? "" : "A_0 is the zero vector") : "no constant coefficient record");
  }
  {
    bool ok = true;
    std::string detail;
    try {
      std::span<const std::complex<double>> bp(model.base_point());
      model.require_in_domain(bp);
      double v = potential<double>(model, bp);
      ok = v > 0;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    push("potential positive at base point", ok, detail);
  }
  {
    bool ok = model.potential_series_full().is_conj_symmetric();
    push("potential series conjugate-symmetric", ok, ok ? "" : "coefficient hermiticity violated");
  }
  return rep;
}

template <class Real>
CVec<Real> evaluate_omega(const VHSModel& model, std::span<const std::complex<Real>> z) {
  using C = std::complex<Real>;
  if constexpr (std::is_same_v<Real, double>) {
    model.require_in_domain(z);
  } else {
    std::vector<std::complex<double>> zd(z.size());
    for (size_t i = 0; i < z.size(); ++i) zd[i] = {double(z[i].real()), double(z[i].imag())};
    model.require_in_domain(zd);
  }
  const int b = model.rank();
  const int k = model.punctures();
  // B = (i/2pi) sum_j N_j log(1/z_j), nilpotent.
  std::vector<C> B(b * b, C(0));
  const Real twopi = 2 * std::numbers::pi_v<Real>;
  for (int j = 0; j < k; ++j) {
    C tau = C(0, 1) * (-std::log(z[j])) / twopi;
    const RatMat& N = model.nilpotents()[j];
    for (int r = 0; r < b; ++r)
      for (int c = 0; c < b; ++c)
        if (N.at(r, c) != 0) B[r * b + c] += tau * to_real<Real>(N.at(r, c));
  }
  // A(z)
  std::vector<C> A(b, C(0));
  for (const auto& rec : model.coeffs()) {
    C mon(1);
    for (int i = 0; i < model.vars(); ++i)
      for (int t = 0; t < rec.powers[i]; ++t) mon *= z[i];
    for (int p = 0; p < b; ++p) A[p] += mon * rec.value[p].template value<Real>();
  }
  // exp(B) A by the finite series.
  std::vector<C> acc = A, term = A;
  for (int i = 1; i <= b; ++i) {
    std::vector<C> next(b, C(0));
    for (int r = 0; r < b; ++r)
      for (int c = 0; c < b; ++c) next[r] += B[r * b + c] * term[c];
    for (int r = 0; r < b; ++r) next[r] /= Real(i);
    bool zero = true;
    for (int r = 0; r < b; ++r)
      if (std::abs(next[r]) != Real(0)) zero = false;
    term = std::move(next);
    for (int r = 0; r < b; ++r) acc[r] += term[r];
    if (zero) break;
  }
  return acc;
}

template <class Real>
std::complex<Real> pairing(const VHSModel& model, std::span<const std::complex<Real>> u,
                           std::span<const std::complex<Real>> v) {
  using C = std::complex<Real>;
  const int b = model.rank();
  C acc(0);
  for (int r = 0; r < b; ++r) {
    if (u[r] == C(0)) continue;
    C row(0);
    for (int c = 0; c < b; ++c)
      if (model.Q().at(r, c) != 0) row += to_real<Real>(model.Q().at(r, c)) * std::conj(v[c]);
    acc += u[r] * row;
  }
  C in = gauss_i_pow(model.weight()).value<Real>();
  return Real(model.pairing_sign()) * in * acc;
}

template <class Real>
Real potential(const VHSModel& model, std::span<const std::complex<Real>> z) {
  auto om = evaluate_omega<Real>(model, z);
  auto p = pairing<Real>(model, std::span<const std::complex<Real>>(om),
                         std::span<const std::complex<Real>>(om));
  Real scale = std::abs(p);
  if (!(p.real() > 0) || std::abs(p.imag()) > Real(1e-12) * scale) {
    std::vector<std::complex<double>> pt(z.size());
    for (size_t i = 0; i < z.size(); ++i) pt[i] = {double(z[i].real()), double(z[i].imag())};
    throw PositivityError("positivity violated: potential not positive real at sample point", pt);
  }
  return p.real();
}

template CVec<double> evaluate_omega<double>(const VHSModel&, std::span<const std::complex<double>>);
template CVec<long double> evaluate_omega<long double>(const VHSModel&,
                                                       std::span<const std::complex<long double>>);
template std::complex<double> pairing<double>(const VHSModel&, std::span<const std::complex<double>>,
                                              std::span<const std::complex<double>>);
template std::complex<long double> pairing<long double>(const VHSModel&,
                                                        std::span<const std::complex<long double>>,
                                                        std::span<const std::complex<long double>>);
template double potential<double>(const VHSModel&, std::span<const std::complex<double>>);
template long double potential<long double>(const VHSModel&,
                                            std::span<const std::complex<long double>>);

PotSeries potential_series(const VHSModel& model, double cap) {
  const int n = model.weight();
  const int m = model.vars();
  const int mn1 = m * n + 1;
  if (model.truncated_at()) {
    int per_var = static_cast<int>(std::floor(cap + double(n) / mn1));
    int needed = m * std::max(per_var, 0);
    if (needed > *model.truncated_at())
      throw InsufficientSeriesError(
          "insufficient series data: degree cap " + std::to_string(cap) +
              " needs holomorphic coefficients through total order " + std::to_string(needed) +
              ", data declared exact through order " + std::to_string(*model.truncated_at()),
          needed, *model.truncated_at());
  }
  PotSeries out(m, model.punctures());
  for (const auto& [key, c] : model.potential_series_full().terms()) {
    bool keep = true;
    for (int j = 0; j < m; ++j) {
      int l = j < model.punctures() ? key.l[j] : 0;
      double deg = key.a[j] + key.b[j] - double(l) / mn1;
      if (deg > cap + 1e-12) {
        keep = false;
        break;
      }
    }
    if (keep) out.add_term(key, c);
  }
  return out;
}

TruncationProbe truncation_error_probe(const VHSModel& model, double mu, int s,
                                       const std::vector<double>& radii) {
  TruncationProbe probe;
  auto tr = truncate_series(model.omega_series(), mu, 0, model.weight());
  probe.k0 = tr.k0;
  probe.l0 = tr.l0;
  OmegaSeries diff = model.omega_series() - tr.kept;

  std::vector<OmegaSeries> derivs;
  derivs.push_back(diff);
  for (int i = 1; i <= s; ++i) derivs.push_back(derivs.back().dz(0));

  const int ntheta = 64;
  std::vector<double> errs;
  for (double r : radii) {
    double emax = 0;
    for (int t = 0; t < ntheta; ++t) {
      double theta = -std::numbers::pi + (t + 0.5) * (2 * std::numbers::pi / ntheta);
      std::vector<std::complex<double>> z = model.base_point();
      z[0] = std::polar(r, theta);
      for (const auto& d : derivs) {
        auto v = d.eval<double>(std::span<const std::complex<double>>(z));
        for (const auto& c : v) emax = std::max(emax, std::abs(c));
      }
    }
    errs.push_back(emax);
    probe.max_error = std::max(probe.max_error, emax);
  }
  if (probe.max_error < 1e-14) {
    probe.exact = true;
    return probe;
  }

  // least squares: log E = c + k log r + l log log(1/r)
  double S[3][3] = {};
  double rhs[3] = {};
  for (size_t i = 0; i < radii.size(); ++i) {
    double x1 = std::log(radii[i]);
    double x2 = std::log(std::log(1.0 / radii[i]));
    double y = std::log(errs[i]);
    double row[3] = {1.0, x1, x2};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) S[a][b] += row[a] * row[b];
      rhs[a] += row[a] * y;
    }
  }
  // solve 3x3
  double M[3][4];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) M[a][b] = S[a][b];
    M[a][3] = rhs[a];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r2 = col + 1; r2 < 3; ++r2)
      if (std::abs(M[r2][col]) > std::abs(M[piv][col])) piv = r2;
    std::swap(M[piv], M[col]);
    for (int r2 = 0; r2 < 3; ++r2) {
      if (r2 == col) continue;
      double f = M[r2][col] / M[col][col];
      for (int b = col; b < 4; ++b) M[r2][b] -= f * M[col][b];
    }
  }
  probe.khat = M[1][3] / M[1][1];
  probe.lhat = M[2][3] / M[2][2];
  return probe;
}

MonodromyOperator jordan_chevalley(const RatMat& T, long order_bound) {
  const int b = T.rows();
  if (T.det() == 0) throw ModelError("monodromy operator must be invertible");
  RatPoly chi = charpoly(T);
  RatPoly p = poly_div_exact(chi, poly_gcd(chi, poly_derivative(chi)));  // squarefree part
  RatPoly dp = poly_derivative(p);

  RatMat S = T;
  for (int iter = 0; iter < b + 2; ++iter) {
    RatMat val = poly_eval(p, S);
    if (val.is_zero()) break;
    RatMat corr = poly_eval(dp, S).inverse() * val;
    S = S - corr;
  }
  if (!poly_eval(p, S).is_zero()) throw ModelError("semisimple part iteration failed to converge");

  MonodromyOperator out;
  out.T = T;
  out.semisimple = S;
  out.unipotent = S.inverse() * T;

  // Least power with S^m = I, bounded search with an entry-height guard.
  RatMat pw = S;
  RatMat I = RatMat::identity(b);
  for (long mexp = 1; mexp <= order_bound; ++mexp) {
    if (pw == I) {
      out.order = mexp;
      break;
    }
    if (pw.height_bits() > 2048) break;  // entries diverging: no finite order
    pw = pw * S;
  }
  return out;
}

VHSModel unipotent_reduction(const VHSModel& model,
                             const std::vector<MonodromyOperator>& monodromies) {
  const int k = model.punctures();
  if (static_cast<int>(monodromies.size()) != k)
    throw ModelError("expected one monodromy operator per puncture");
  std::vector<long> mj(k);
  for (int j = 0; j < k; ++j) {
    if (!monodromies[j].order) throw ModelError("semisimple part has infinite order");
    mj[j] = *monodromies[j].order;
    RatMat nu = log_unipotent(monodromies[j].unipotent);
    if (!(nu == model.nilpotents()[j]))
      throw ModelError("monodromy unipotent part inconsistent with model nilpotent N_" +
                       std::to_string(j + 1));
  }

  std::vector<RatMat> newN(model.nilpotents());
  for (int j = 0; j < k; ++j) newN[j] = newN[j].scaled(BigRat(mj[j]));

  std::vector<CoeffRecord> coeffs = model.coeffs();
  for (auto& rec : coeffs)
    for (int j = 0; j < k; ++j) rec.powers[j] *= static_cast<int>(mj[j]);

  long mmax = *std::max_element(mj.begin(), mj.end());
  double newrad = std::pow(to_double(model.radius()), 1.0 / double(mmax));
  BigRat radius(BigInt(static_cast<long long>(std::floor(newrad * 1000000.0))), BigInt(1000000));

  std::vector<std::complex<double>> base = model.base_point();
  for (int j = 0; j < k; ++j) base[j] = std::pow(base[j], 1.0 / double(mj[j]));

  std::optional<int> trunc;
  if (model.truncated_at()) trunc = *model.truncated_at() * static_cast<int>(mmax);

  return VHSModel(model.weight(), model.rank(), model.vars(), k, model.Q(), std::move(newN),
                  std::move(coeffs), std::move(radius), std::move(base), trunc);
}

UntwistReport untwist_check(const VHSModel& model, int sample_count,
                            const std::vector<RatMat>* untwist_nilpotents) {
  const std::vector<RatMat>& UN = untwist_nilpotents ? *untwist_nilpotents : model.nilpotents();
  const int b = model.rank();
  const int k = model.punctures();
  const int m = model.vars();
  const double twopi = 2 * std::numbers::pi;

  auto matvec = [&](const std::vector<std::complex<double>>& B,
                    std::vector<std::complex<double>> v) {
    // exp(B) v by the truncated series; B is (near-)nilpotent here.
    std::vector<std::complex<double>> acc = v, term = std::move(v);
    for (int i = 1; i <= b + 2; ++i) {
      std::vector<std::complex<double>> next(b, 0.0);
      for (int r = 0; r < b; ++r)
        for (int c = 0; c < b; ++c) next[r] += B[r * b + c] * term[c];
      for (int r = 0; r < b; ++r) next[r] /= double(i);
      term = std::move(next);
      for (int r = 0; r < b; ++r) acc[r] += term[r];
    }
    return acc;
  };

  auto avalue = [&](const std::vector<std::complex<double>>& z) {
    std::vector<std::complex<double>> A(b, 0.0);
    for (const auto& rec : model.coeffs()) {
      std::complex<double> mon(1);
      for (int i = 0; i < m; ++i)
        for (int t = 0; t < rec.powers[i]; ++t) mon *= z[i];
      for (int p = 0; p < b; ++p) A[p] += mon * rec.value[p].value<double>();
    }
    return A;
  };

  // psi at a point with the per-puncture branch of log(1/z) given explicitly.
  auto psi = [&](const std::vector<std::complex<double>>& z,
                 const std::vector<std::complex<double>>& logs) {
    std::vector<std::complex<double>> Bo(b * b, 0.0), Bu(b * b, 0.0);
    for (int j = 0; j < k; ++j) {
      std::complex<double> tau = std::complex<double>(0, 1) * logs[j] / twopi;
      for (int r = 0; r < b; ++r)
        for (int c = 0; c < b; ++c) {
          if (model.nilpotents()[j].at(r, c) != 0)
            Bo[r * b + c] += tau * to_double(model.nilpotents()[j].at(r, c));
          if (UN[j].at(r, c) != 0) Bu[r * b + c] -= tau * to_double(UN[j].at(r, c));
        }
    }
    return matvec(Bu, matvec(Bo, avalue(z)));
  };

  UntwistReport rep;
  double delta = to_double(model.radius());
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < sample_count; ++i) {
      double r = delta * std::exp(-(1.0 + 9.0 * i / std::max(1, sample_count - 1)));
      double w = std::log(1.0 / r);
      std::vector<std::complex<double>> z = model.base_point();
      z[j] = -r;
      std::vector<std::complex<double>> logs(k);
      for (int jj = 0; jj < k; ++jj) logs[jj] = -std::log(z[jj]);
      auto lp = logs, lm = logs;
      lp[j] = {w, -std::numbers::pi};  // limit from theta -> pi
      lm[j] = {w, std::numbers::pi};   // limit from theta -> -pi
      auto vp = psi(z, lp);
      auto vm = psi(z, lm);
      double num = 0, den = 0;
      for (int p = 0; p < b; ++p) {
        num = std::max(num, std::abs(vp[p] - vm[p]));
        den = std::max(den, std::abs(vp[p]));
      }
      rep.max_cut_residual = std::max(rep.max_cut_residual, den > 0 ? num / den : num);
    }
    // boundedness along a ray
    double prev = -1;
    for (int i = 0; i < sample_count; ++i) {
      double r = delta * std::exp(-(2.0 + 2.0 * i));
      std::vector<std::complex<double>> z = model.base_point();
      z[j] = std::polar(r, 0.5);
      std::vector<std::complex<double>> logs(k);
      for (int jj = 0; jj < k; ++jj) logs[jj] = -std::log(z[jj]);
      auto v = psi(z, logs);
      double norm = 0;
      for (const auto& c : v) norm += std::norm(c);
      norm = std::sqrt(norm);
      if (prev > 0) rep.max_growth_ratio = std::max(rep.max_growth_ratio, norm / prev);
      prev = norm;
    }
  }
  rep.single_valued = rep.max_cut_residual < 1e-10;
  rep.bounded = rep.max_growth_ratio < 1.5;
  return rep;
}

PotentialJet::PotentialJet(const VHSModel& model, int max_dz, int max_dzbar)
    : m_(model.vars()), k_(model.punctures()) {
  auto das = multi_indices_up_to(m_, max_dz);
  auto dbs = multi_indices_up_to(m_, max_dzbar);
  // derivative series built incrementally: d(a+e_i, b) = dz_i d(a, b)
  std::map<std::pair<std::vector<int>, std::vector<int>>, PotSeries> built;
  built[{std::vector<int>(m_, 0), std::vector<int>(m_, 0)}] = model.potential_series_full();
  auto get = [&](auto&& self, const std::vector<int>& da,
                 const std::vector<int>& db) -> const PotSeries& {
    auto it = built.find({da, db});
    if (it != built.end()) return it->second;
    for (int i = 0; i < m_; ++i) {
      if (da[i] > 0) {
        std::vector<int> prev = da;
        prev[i] -= 1;
        PotSeries s = self(self, prev, db).dz(i);
        return built.emplace(std::make_pair(da, db), std::move(s)).first->second;
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (db[i] > 0) {
        std::vector<int> prev = db;
        prev[i] -= 1;
        PotSeries s = self(self, da, prev).dzbar(i);
        return built.emplace(std::make_pair(da, db), std::move(s)).first->second;
      }
    }
    throw std::logic_error("jet recursion");
  };
  for (const auto& da : das)
    for (const auto& db : dbs) {
      const PotSeries& s = get(get, da, db);
      idx_[{da, db}] = entries_.size();
      entries_.push_back({da, db, s});
    }
}

const PotSeries& PotentialJet::series(const std::vector<int>& da,
                                      const std::vector<int>& db) const {
  return entries_[index(da, db)].s;
}

size_t PotentialJet::index(const std::vector<int>& da, const std::vector<int>& db) const {
  auto it = idx_.find({da, db});
  if (it == idx_.end()) throw std::out_of_range("derivative order not in jet");
  return it->second;
}

OmegaJet::OmegaJet(const VHSModel& model, int max_total_order) {
  orders_ = multi_indices_up_to(model.vars(), max_total_order);
  jets_[std::vector<int>(model.vars(), 0)] = model.omega_series();
  for (const auto& d : orders_) {
    if (jets_.count(d)) continue;
    for (int i = 0; i < model.vars(); ++i) {
      if (d[i] > 0) {
        std::vector<int> prev = d;
        prev[i] -= 1;
        jets_[d] = jets_.at(prev).dz(i);
        break;
      }
    }
  }
}

const OmegaSeries& OmegaJet::series(const std::vector<int>& d) const { return jets_.at(d); }

std::vector<std::vector<int>> multi_indices_up_to(int vars, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(vars, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == vars) {
      out.push_back(cur);
      return;
    }
    for (int t = 0; t <= remaining; ++t) {
      cur[pos] = t;
      self(self, pos + 1, remaining - t);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, total);
  // sort by total order then lexicographic, so flag blocks come out grouped
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int sa = std::accumulate(a.begin(), a.end(), 0);
    int sb = std::accumulate(b.begin(), b.end(), 0);
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return out;
}

}  // namespace wpg
