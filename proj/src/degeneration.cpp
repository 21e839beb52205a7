#include "wpg/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace wpg {

namespace {

// Leibniz determinant of the matrix of series P_{ab} = d_a h dbar_b h - h d_a dbar_b h.
PotSeries det_p_series(const VHSModel& model) {
  const int m = model.vars();
  PotentialJet jet(model, 1, 1);
  std::vector<int> zero(m, 0);
  auto e = [&](int i) {
    std::vector<int> v(m, 0);
    v[i] = 1;
    return v;
  };
  const PotSeries& h = jet.series(zero, zero);
  std::vector<PotSeries> P(size_t(m) * m, PotSeries(m, model.punctures()));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      P[size_t(a) * m + b] =
          jet.series(e(a), zero) * jet.series(zero, e(b)) - h * jet.series(e(a), e(b));

  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  PotSeries det(m, model.punctures());
  do {
    int sgn = 1;
    {
      std::vector<bool> seen(m, false);
      for (int i = 0; i < m; ++i) {
        if (seen[i]) continue;
        int j = i, len = 0;
        while (!seen[j]) {
          seen[j] = true;
          j = perm[j];
          ++len;
        }
        if (len % 2 == 0) sgn = -sgn;
      }
    }
    PotSeries prod = P[size_t(0) * m + perm[0]];
    for (int a = 1; a < m; ++a) prod = prod * P[size_t(a) * m + perm[a]];
    det = (sgn > 0) ? det + prod : det - prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

struct ClassKey {
  int k, l;
  auto operator<=>(const ClassKey&) const = default;
};

// coefficients of the homogeneous piece, as sub-series over the other variables
struct ClassData {
  std::map<int, PotSeries> by_s;  // s -> sub-series with variable `divisor` stripped out
};

std::map<ClassKey, ClassData> collect_classes(const VHSModel& model, const PotSeries& gtilde,
                                              int j) {
  std::map<ClassKey, ClassData> classes;
  const int m = model.vars();
  const int kk = model.punctures();
  for (const auto& [key, coeff] : gtilde.terms()) {
    int s = key.a[j], t = key.b[j];
    int l = j < kk ? key.l[j] : 0;
    ClassKey ck{s + t, l};
    auto& cd = classes[ck];
    auto it = cd.by_s.find(s);
    if (it == cd.by_s.end()) it = cd.by_s.emplace(s, PotSeries(m, kk)).first;
    PotSeries::Key rest = key;
    rest.a[j] = 0;
    rest.b[j] = 0;
    if (j < kk) rest.l[j] = 0;
    it->second.add_term(rest, coeff);
  }
  return classes;
}

}  // namespace

PotSeries gtilde_series(const VHSModel& model, int divisor, double degree_cap) {
  if (divisor < 0 || divisor >= model.punctures())
    throw ModelError("divisor index out of range");
  PotSeries det = det_p_series(model);
  PotSeries gt = det.shifted(divisor, 1, 1);  // r_j^2 det(P)
  if (gt.empty()) throw ModelError("volume form degenerate: det of the potential Hessian is 0");
  for (const auto& [key, coeff] : gt.terms())
    if (key.a[divisor] < 0 || key.b[divisor] < 0)
      throw ModelError("unexpected pole along the divisor in the reduced volume series");
  if (std::isfinite(degree_cap)) {
    const int denom = model.vars() * model.weight() + 1;
    PotSeries capped(model.vars(), model.punctures());
    for (const auto& [key, coeff] : gt.terms()) {
      int l = divisor < model.punctures() ? key.l[divisor] : 0;
      double deg = key.a[divisor] + key.b[divisor] - double(l) / denom;
      if (deg <= degree_cap + 1e-12) capped.add_term(key, coeff);
    }
    return capped;
  }
  return gt;
}

LeadingTerm leading_term(const VHSModel& model, const PotSeries& gtilde, int divisor,
                         const std::vector<std::complex<double>>* transverse) {
  if (gtilde.empty()) throw ModelError("leading term of the zero series");
  const int denom = model.vars() * model.weight() + 1;
  auto classes = collect_classes(model, gtilde, divisor);

  const ClassKey* best = nullptr;
  double best_deg = 0;
  bool tie = false;
  for (const auto& [ck, cd] : classes) {
    double deg = ck.k - double(ck.l) / denom;
    if (!best || deg < best_deg - 1e-12) {
      best = &ck;
      best_deg = deg;
      tie = false;
    } else if (deg < best_deg + 1e-12 && !(ck == *best)) {
      tie = true;
    }
  }
  if (tie) {
    std::ostringstream os;
    os << "ambiguous leading degree " << best_deg << " along divisor " << divisor
       << ": two distinct (k,l) exponent pairs attain it";
    throw ModelError(os.str());
  }

  std::vector<std::complex<double>> zp =
      transverse ? *transverse : model.base_point();
  PointCtx<double> ctx(std::span<const std::complex<double>>(zp), model.punctures());

  LeadingTerm lt;
  lt.divisor = divisor;
  lt.k = best->k;
  lt.l = best->l;
  lt.coeffs.assign(lt.k + 1, {});
  for (const auto& [s, sub] : classes.at(*best).by_s) lt.coeffs[s] = sub.eval(ctx);
  return lt;
}

PositivityOutcome homogeneous_positivity_check(const std::vector<std::complex<double>>& coeffs,
                                               double tol) {
  PositivityOutcome out;
  const int k = static_cast<int>(coeffs.size()) - 1;
  out.k = k;
  double scale = 0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0) {
    out.violation = "identically zero piece";
    return out;
  }
  for (int s = 0; s <= k; ++s)
    if (std::abs(coeffs[s] - std::conj(coeffs[k - s])) > tol * scale) {
      std::ostringstream os;
      os << "coefficient hermiticity fails at s = " << s << " (f is not real-valued)";
      out.violation = os.str();
      return out;
    }
  if (k % 2 == 1) {
    out.violation = "odd homogeneous degree with a nonzero piece";
    return out;
  }
  for (int s = 0; s <= k; ++s) {
    if (s == k / 2) continue;
    if (std::abs(coeffs[s]) > tol * scale) {
      std::ostringstream os;
      os << "unbalanced coefficient at (s,t) = (" << s << "," << (k - s)
         << "): f takes negative values on rays";
      out.violation = os.str();
      return out;
    }
  }
  double c = coeffs[k / 2].real();
  if (!(c > 0)) {
    out.violation = "balanced coefficient not positive";
    return out;
  }
  out.ok = true;
  out.c = c;
  return out;
}

DegenerationOrder degeneration_order(const VHSModel& model, int divisor) {
  PotSeries gt = gtilde_series(model, divisor);
  LeadingTerm lt = leading_term(model, gt, divisor);
  PositivityOutcome pos = homogeneous_positivity_check(lt.coeffs);
  if (!pos.ok)
    throw ModelError("degeneration order undefined along divisor " + std::to_string(divisor) +
                     ": " + pos.violation);
  DegenerationOrder out;
  out.divisor = divisor;
  out.k = lt.k;
  out.l = lt.l;
  out.tau = (lt.k - 2) / 2;
  out.leading_constant = pos.c;
  return out;
}

OrderConstancyReport order_constancy_probe(const VHSModel& model, int divisor, int samples,
                                           double genericity_threshold) {
  OrderConstancyReport rep;
  if (model.vars() == 1) {
    rep.notes.push_back("vacuous: no transverse directions");
    return rep;
  }
  PotSeries gt = gtilde_series(model, divisor);
  auto classes = collect_classes(model, gt, divisor);
  const int denom = model.vars() * model.weight() + 1;

  std::vector<std::pair<double, ClassKey>> order;
  for (const auto& [ck, cd] : classes) order.push_back({ck.k - double(ck.l) / denom, ck});
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::optional<ClassKey> leading;
  for (int s = 0; s < samples; ++s) {
    std::vector<std::complex<double>> zp = model.base_point();
    double r = 0.02 + 0.1 * (s % 7) / 7.0;
    double th = -2.5 + 5.0 * s / std::max(1, samples - 1);
    for (int i = 0; i < model.vars(); ++i)
      if (i != divisor) zp[i] = std::polar(r, th + 0.3 * i);
    PointCtx<double> ctx(std::span<const std::complex<double>>(zp), model.punctures());

    // evaluate every class at this transverse point
    double scale = 0;
    std::map<ClassKey, double> mag;
    for (const auto& [ck, cd] : classes) {
      double mx = 0;
      for (const auto& [ss, sub] : cd.by_s) mx = std::max(mx, std::abs(sub.eval(ctx)));
      mag[ck] = mx;
      scale = std::max(scale, mx);
    }
    const ClassKey* found = nullptr;
    for (const auto& [deg, ck] : order)
      if (mag[ck] > genericity_threshold * scale) {
        found = &ck;
        break;
      }
    if (!found) {
      ++rep.samples_skipped;
      continue;
    }
    ++rep.samples_used;
    if (!leading) {
      leading = *found;
    } else if (!(*leading == *found)) {
      rep.constant = false;
      std::ostringstream os;
      os << "leading pair changed to (k,l)=(" << found->k << "," << found->l << ") at sample "
         << s;
      rep.notes.push_back(os.str());
    }
  }
  return rep;
}

}  // namespace wpg
