#include "wpg/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

namespace wpg {

namespace {

constexpr double kPi = std::numbers::pi;

// boundary of the fundamental-domain chart in v = 1/log(1/r), per angle
double modular_v_outer(double theta) { return 1.0 / std::sqrt(4.0 * kPi * kPi - theta * theta); }

double mixed_discriminant_real(const std::vector<const Eigen::MatrixXcd*>& mats) {
  const int m = static_cast<int>(mats.size());
  std::vector<int> sigma(m), rho(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  double acc = 0;
  auto sign_of = [](const std::vector<int>& p) {
    int s = 1;
    std::vector<bool> seen(p.size(), false);
    for (size_t i = 0; i < p.size(); ++i) {
      if (seen[i]) continue;
      size_t j = i, len = 0;
      while (!seen[j]) {
        seen[j] = true;
        j = p[j];
        ++len;
      }
      if (len % 2 == 0) s = -s;
    }
    return s;
  };
  do {
    int ss = sign_of(sigma);
    std::iota(rho.begin(), rho.end(), 0);
    do {
      std::complex<double> prod(1);
      for (int j = 0; j < m; ++j) prod *= (*mats[j])(sigma[j], rho[j]);
      acc += ss * sign_of(rho) * prod.real();
    } while (std::next_permutation(rho.begin(), rho.end()));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  // 1/m! normalization so that D(A,..,A) = det A
  double f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return acc / f;
}

struct CellGrid {
  // one axis per real coordinate: punctures contribute (v or sigma, theta),
  // regular variables (q = rho^2, phi)
  std::vector<double> lo, hi;
  std::vector<long> count;
  long total() const {
    long t = 1;
    for (long c : count) t *= c;
    return t;
  }
};

struct PointSample {
  std::vector<double> x;
  double weight;
};

// integrand over grid coordinates -> density (already includes jacobians)
using Density = std::function<double(const std::vector<double>&)>;

double sum_cells(const CellGrid& grid, const Density& f, int rule_points, int threads,
                 std::ostream* csv) {
  const int dims = static_cast<int>(grid.count.size());
  const long total = grid.total();
  std::vector<double> width(dims);
  for (int d = 0; d < dims; ++d) width[d] = (grid.hi[d] - grid.lo[d]) / grid.count[d];

  const double gauss = 1.0 / std::sqrt(3.0);
  auto cell_value = [&](long idx, std::vector<double>& corner) {
    long rem = idx;
    double area = 1;
    for (int d = 0; d < dims; ++d) {
      long c = rem % grid.count[d];
      rem /= grid.count[d];
      corner[d] = grid.lo[d] + c * width[d];
      area *= width[d];
    }
    double acc = 0;
    if (rule_points == 1) {
      std::vector<double> x(dims);
      for (int d = 0; d < dims; ++d) x[d] = corner[d] + 0.5 * width[d];
      acc = f(x) * area;
    } else {
      long pts = 1;
      for (int d = 0; d < dims; ++d) pts *= 2;
      std::vector<double> x(dims);
      for (long p = 0; p < pts; ++p) {
        long r = p;
        for (int d = 0; d < dims; ++d) {
          int side = r & 1;
          r >>= 1;
          double off = 0.5 + (side ? 0.5 : -0.5) * gauss;
          x[d] = corner[d] + off * width[d];
        }
        acc += f(x);
      }
      acc *= area / pts;
    }
    return acc;
  };

  // deterministic reduction: fixed chunking by cell index, chunk sums in order
  const long nchunks = std::min<long>(64, std::max<long>(1, total));
  std::vector<double> chunk_sum(nchunks, 0.0);
  std::atomic<long> next{0};
  auto worker = [&]() {
    std::vector<double> corner(dims);
    while (true) {
      long chunk = next.fetch_add(1);
      if (chunk >= nchunks) break;
      long begin = chunk * total / nchunks;
      long end = (chunk + 1) * total / nchunks;
      double s = 0, comp = 0;
      for (long i = begin; i < end; ++i) {
        double v = cell_value(i, corner);
        double y = v - comp;  // compensated summation keeps runs reproducible
        double t = s + y;
        comp = (t - s) - y;
        s = t;
      }
      chunk_sum[chunk] = s;
    }
  };
  int nt = std::max(1, threads);
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (csv) {
    std::vector<double> corner(dims);
    for (long i = 0; i < total; ++i) {
      double v = cell_value(i, corner);
      *csv << i;
      for (int d = 0; d < dims; ++d) *csv << "," << corner[d] << "," << (corner[d] + width[d]);
      *csv << "," << v << "\n";
    }
  }
  double s = 0;
  for (double c : chunk_sum) s += c;
  return s;
}

struct FormIntegrand {
  const GeometryContext* ctx;
  const ChartSpec* chart;
  int k, l, m, punctures;
  double eps;
  PoincareChart pchart;

  double operator()(const std::vector<double>& x) const {
    // unpack grid coordinates into a point
    std::vector<std::complex<double>> z(m);
    double jac = 1.0;
    int off = 0;
    for (int j = 0; j < punctures; ++j) {
      double vcoord = x[off], theta = x[off + 1];
      off += 2;
      double v;
      if (chart->modular) {
        double vout = modular_v_outer(theta);
        v = vcoord * vout;
        jac *= vout;
      } else {
        v = vcoord;
      }
      if (v <= 1e-14) return 0.0;
      double r = std::exp(-1.0 / v);
      if (r <= 5e-324) return 0.0;
      z[j] = std::polar(r, theta);
      jac *= (r * r) / (v * v);  // r dr dtheta = (r^2/v^2) dv dtheta
    }
    for (int j = punctures; j < m; ++j) {
      double q = x[off], phi = x[off + 1];
      off += 2;
      z[j] = std::polar(std::sqrt(q), phi);
      jac *= 0.5;  // rho drho dphi = (1/2) dq dphi
    }
    double rho = 1.0;
    if (eps > 0) rho = rho_eps(pchart, std::span<const std::complex<double>>(z), eps);
    if (rho == 0.0) return 0.0;

    auto g = wp_metric<double>(*ctx, std::span<const std::complex<double>>(z),
                               /*require_positive=*/false);
    Eigen::MatrixXcd G = g.g;
    double scale = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) scale = std::max(scale, std::abs(G(i, j)));
    if (g.min_eigenvalue < -1e-10 * scale)
      throw MetricError("metric indefinite inside a quadrature cell",
                        {g.min_eigenvalue});
    Eigen::MatrixXcd S;
    if (k > 0) {
      if (!(g.min_eigenvalue > 1e-13 * scale))
        throw MetricError("metric degenerate inside a cell: Ricci form undefined",
                          {g.min_eigenvalue});
      S = ricci_direct<double>(*ctx, std::span<const std::complex<double>>(z));
    }
    std::vector<const Eigen::MatrixXcd*> mats;
    for (int t = 0; t < k; ++t) mats.push_back(&S);
    for (int t = 0; t < l; ++t) mats.push_back(&G);
    double D = mixed_discriminant_real(mats);
    double mfact = 1;
    for (int i = 2; i <= m; ++i) mfact *= i;
    double density = mfact * D / std::pow(kPi, m);
    return rho * density * jac;
  }
};

double raw_estimate(const GeometryContext& ctx, const ChartSpec& chart, int k, int l, double eps,
                    long nrad, long nang, int rule_points, const QuadratureOptions& opts,
                    std::ostream* csv) {
  const int m = ctx.model().vars();
  const int punct = ctx.model().punctures();
  CellGrid grid;
  for (int j = 0; j < punct; ++j) {
    double v_lo, v_hi;
    if (chart.modular) {
      // sigma in [sigma_lo, 1], v = sigma * v_outer(theta); below sigma_lo the
      // cut-off vanishes for every angle since v_outer is largest at theta = pi
      v_lo = eps > 0 ? eps / modular_v_outer(kPi) : 0.0;
      v_hi = 1.0;
    } else {
      double r_in = chart.radial[j].first, r_out = chart.radial[j].second;
      v_hi = 1.0 / std::log(1.0 / r_out);
      v_lo = r_in > 0 ? 1.0 / std::log(1.0 / r_in) : 0.0;
      if (eps > 0) v_lo = std::max(v_lo, eps);  // rho_eps vanishes below v = eps
    }
    grid.lo.push_back(v_lo);
    grid.hi.push_back(v_hi);
    grid.count.push_back(nrad);
    grid.lo.push_back(-kPi);
    grid.hi.push_back(kPi);
    grid.count.push_back(nang);
  }
  for (int j = punct; j < m; ++j) {
    double R = chart.disk_radius.empty() ? 0.25 : chart.disk_radius[j - punct];
    grid.lo.push_back(0.0);
    grid.hi.push_back(R * R);
    grid.count.push_back(nrad);
    grid.lo.push_back(-kPi);
    grid.hi.push_back(kPi);
    grid.count.push_back(nang);
  }
  FormIntegrand f{&ctx, &chart, k, l, m, punct, eps,
                  PoincareChart::punctured(m, punct, 1.0)};
  return sum_cells(grid, std::cref(f), rule_points, opts.threads, csv);
}

}  // namespace

IntegralEstimate integrate_form(const GeometryContext& ctx, const ChartSpec& chart, int k, int l,
                                double eps, int level, const QuadratureOptions& opts) {
  if (k + l != ctx.model().vars())
    throw ModelError("form degree k + l must equal the number of variables");
  if (chart.modular && (ctx.model().vars() != 1 || ctx.model().punctures() != 1))
    throw ModelError("the modular chart is a one-puncture chart");
  if (eps <= 0) {
    bool touches = chart.modular;
    for (const auto& [rin, rout] : chart.radial)
      if (rin <= 0) touches = true;
    if (touches) throw ModelError("charts touching the divisor need a positive cut-off eps");
  }
  long nrad = opts.base_radial << level;
  long nang = opts.base_angular << level;
  int rule = level >= 1 ? 2 : 1;

  std::ofstream csv;
  std::ostream* csvp = nullptr;
  if (!opts.csv_path.empty()) {
    csv.open(opts.csv_path);
    csv << "cell";
    for (int d = 0; d < 2 * ctx.model().vars(); ++d) csv << ",lo" << d << ",hi" << d;
    csv << ",contribution\n";
    csvp = &csv;
  }

  double fine = raw_estimate(ctx, chart, k, l, eps, nrad, nang, rule, opts, csvp);
  long crad = std::max<long>(1, nrad / 2), cang = std::max<long>(1, nang / 2);
  int crule = level >= 2 ? 2 : 1;
  double coarse = raw_estimate(ctx, chart, k, l, eps, crad, cang, crule, opts, nullptr);

  IntegralEstimate est;
  est.value = fine;
  est.bracket = std::abs(fine - coarse);
  est.eps = eps;
  est.form_k = k;
  est.form_l = l;
  est.level = level;
  est.cells = 1;
  for (int j = 0; j < ctx.model().vars(); ++j) est.cells *= nrad * nang;
  return est;
}

EpsLimit eps_limit(const std::vector<IntegralEstimate>& estimates) {
  if (estimates.size() < 3) throw ModelError("eps extrapolation needs at least 3 estimates");
  std::vector<double> x, y, br;
  for (const auto& e : estimates) {
    x.push_back(e.eps);
    y.push_back(e.value);
    br.push_back(e.bracket);
  }
  // expect decreasing eps
  for (size_t i = 1; i < x.size(); ++i)
    if (x[i] >= x[i - 1]) throw ModelError("eps list must be strictly decreasing");

  EpsLimit out;
  // Cauchy check on successive differences
  for (size_t i = 2; i < y.size(); ++i)
    if (std::abs(y[i] - y[i - 1]) > std::abs(y[i - 1] - y[i - 2]) + 1e-15) out.cauchy = false;

  double scale = 0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  double brsum = 0;
  for (double b : br) brsum += b;

  size_t first = 0;  // drop leading (largest-eps) points outside the linear regime
  auto fit = [&](size_t from, double& a, double& b, double& maxres,
                 std::vector<double>& w) {
    size_t n = x.size() - from;
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (size_t i = from; i < x.size(); ++i) {
      sx += x[i];
      sxx += x[i] * x[i];
      sy += y[i];
      sxy += x[i] * y[i];
    }
    double denom = double(n) * sxx - sx * sx;
    b = (double(n) * sxy - sx * sy) / denom;
    a = (sy - b * sx) / n;
    maxres = 0;
    for (size_t i = from; i < x.size(); ++i)
      maxres = std::max(maxres, std::abs(y[i] - (a + b * x[i])));
    w.assign(x.size(), 0.0);
    for (size_t i = from; i < x.size(); ++i) w[i] = (sxx - sx * x[i]) / denom;
  };

  double a = 0, b = 0, maxres = 0;
  std::vector<double> w;
  while (true) {
    fit(first, a, b, maxres, w);
    bool linear = maxres <= std::max(10.0 * (brsum + 1e-15), 1e-12 * std::max(scale, 1.0));
    if (linear || x.size() - first <= 3) break;
    ++first;
  }
  if (x.size() - first == 3 && maxres > std::max(10.0 * (brsum + 1e-15), 1e-12 * std::max(scale, 1.0))) {
    // fall back to the two finest points: exact line through them
    first = x.size() - 2;
    size_t i0 = first, i1 = first + 1;
    b = (y[i1] - y[i0]) / (x[i1] - x[i0]);
    a = y[i0] - b * x[i0];
    w.assign(x.size(), 0.0);
    w[i0] = x[i1] / (x[i1] - x[i0]);
    w[i1] = -x[i0] / (x[i1] - x[i0]);
    maxres = 0;
  }

  out.value = a;
  out.slope = b;
  out.used_points = static_cast<int>(x.size() - first);
  double propagated = 0;
  for (size_t i = 0; i < x.size(); ++i) propagated += std::abs(w[i]) * br[i];
  out.uncertainty = std::max(maxres, propagated);
  return out;
}

double stokes_volume_1d(const GeometryContext& ctx, double inner, double outer, int nodes) {
  if (ctx.model().vars() != 1) throw ModelError("contour oracle needs a one-variable model");
  std::vector<int> e1{1}, e0{0};
  auto circle_avg = [&](double r) {
    double acc = 0;
    for (int t = 0; t < nodes; ++t) {
      double theta = -kPi + (t + 0.5) * (2 * kPi / nodes);
      std::complex<double> z = std::polar(r, theta);
      PointCtx<double> pc(std::span<const std::complex<double>>(&z, 1), 1);
      auto h = ctx.pjet().series(e0, e0).eval(pc);
      auto hz = ctx.pjet().series(e1, e0).eval(pc);
      if (!(h.real() > 0))
        throw PositivityError("potential not positive on contour", {z});
      acc += 2.0 * (z * hz / h).real();
    }
    acc /= nodes;                 // average of r d_r log h
    return -acc / 2.0;            // -(1/4pi) * integral over theta = -(2pi avg)/(4pi)
  };
  return circle_avg(outer) - circle_avg(inner);
}

std::vector<ShellContribution> log_integrability_probe(const GeometryContext& ctx,
                                                       const std::vector<double>& eps_list) {
  const int k = ctx.model().punctures();
  const int m = ctx.model().vars();
  std::vector<ShellContribution> out;
  const int nv = 12, nth = 12;
  std::vector<int> zero(m, 0);
  for (size_t s = 0; s + 1 < eps_list.size(); ++s) {
    double hi = eps_list[s], lo = eps_list[s + 1];
    // product shell lo <= v_j <= hi over all punctures, midpoint rule in
    // (v, theta) per puncture; regular variables pinned at the base point
    long cells = 1;
    for (int j = 0; j < 2 * k; ++j) cells *= (j % 2 == 0 ? nv : nth);
    double sum = 0;
    for (long c = 0; c < cells; ++c) {
      long rem = c;
      std::vector<std::complex<double>> z = ctx.model().base_point();
      double w = 1;
      for (int j = 0; j < k; ++j) {
        long iv = rem % nv;
        rem /= nv;
        long it = rem % nth;
        rem /= nth;
        double v = lo + (iv + 0.5) * (hi - lo) / nv;
        double th = -kPi + (it + 0.5) * (2 * kPi / nth);
        z[j] = std::polar(std::exp(-1.0 / v), th);
        w *= ((hi - lo) / nv) * (2 * kPi / nth);
      }
      PointCtx<double> pc(std::span<const std::complex<double>>(z), k);
      double h = ctx.pjet().series(zero, zero).eval(pc).real();
      sum += std::abs(std::log(std::abs(h))) * w;
    }
    out.push_back({hi, lo, sum});
  }
  return out;
}

}  // namespace wpg
