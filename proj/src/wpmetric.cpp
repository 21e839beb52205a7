#include "wpg/wpmetric.hpp"

#include <sstream>

namespace wpg {

namespace {

std::vector<int> unit(int m, int i) {
  std::vector<int> e(m, 0);
  e[i] = 1;
  return e;
}

std::vector<int> unit2(int m, int i, int k) {
  std::vector<int> e(m, 0);
  e[i] += 1;
  e[k] += 1;
  return e;
}

template <class Real>
std::vector<std::complex<double>> to_double_point(std::span<const std::complex<Real>> z) {
  std::vector<std::complex<double>> p(z.size());
  for (size_t i = 0; i < z.size(); ++i) p[i] = {double(z[i].real()), double(z[i].imag())};
  return p;
}

// All fourth-order log-derivative assembly happens through this view.
template <class Real>
struct LogJet {
  const typename PotentialJet::template Values<Real>& J;
  int m;
  std::vector<int> zero;

  LogJet(const typename PotentialJet::template Values<Real>& vals, int vars)
      : J(vals), m(vars), zero(vars, 0) {}

  std::complex<Real> H(const std::vector<int>& da, const std::vector<int>& db) const {
    return J.get(da, db);
  }

  std::complex<Real> h() const { return H(zero, zero); }

  // L = log h; mixed derivatives up to (2,2)
  std::complex<Real> L11(int i, int j) const {
    auto hv = h();
    return H(unit(m, i), unit(m, j)) / hv -
           H(unit(m, i), zero) * H(zero, unit(m, j)) / (hv * hv);
  }

  std::complex<Real> L21(int i, int j, int k) const {
    auto hv = h();
    auto hi = H(unit(m, i), zero), hk = H(unit(m, k), zero);
    auto hbj = H(zero, unit(m, j));
    auto hij = H(unit(m, i), unit(m, j));
    auto hik = H(unit2(m, i, k), zero);
    auto hkj = H(unit(m, k), unit(m, j));
    auto hijk = H(unit2(m, i, k), unit(m, j));
    auto h2 = hv * hv, h3 = h2 * hv;
    return hijk / hv - (hij * hk + hik * hbj + hi * hkj) / h2 +
           Real(2) * hi * hbj * hk / h3;
  }

  std::complex<Real> L22(int i, int j, int k, int l) const {
    auto hv = h();
    auto hi = H(unit(m, i), zero), hk = H(unit(m, k), zero);
    auto hbj = H(zero, unit(m, j)), hbl = H(zero, unit(m, l));
    auto hij = H(unit(m, i), unit(m, j));
    auto hil = H(unit(m, i), unit(m, l));
    auto hkj = H(unit(m, k), unit(m, j));
    auto hkl = H(unit(m, k), unit(m, l));
    auto hik = H(unit2(m, i, k), zero);
    auto hjl = H(zero, unit2(m, j, l));
    auto hijk = H(unit2(m, i, k), unit(m, j));
    auto hijl = H(unit(m, i), unit2(m, j, l));
    auto hikl = H(unit2(m, i, k), unit(m, l));
    auto hjkl = H(unit(m, k), unit2(m, j, l));
    auto hijkl = H(unit2(m, i, k), unit2(m, j, l));
    auto h2 = hv * hv, h3 = h2 * hv, h4 = h3 * hv;
    return hijkl / hv -
           (hijk * hbl + hijl * hk + hij * hkl + hikl * hbj + hik * hjl + hil * hkj +
            hi * hjkl) /
               h2 +
           Real(2) *
               (hij * hk * hbl + hik * hbj * hbl + hi * hkj * hbl + hil * hbj * hk +
                hi * hjl * hk + hi * hbj * hkl) /
               h3 -
           Real(6) * hi * hbj * hk * hbl / h4;
  }
};

template <class Real>
MatX<Real> metric_matrix(const LogJet<Real>& lj) {
  const int m = lj.m;
  MatX<Real> g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = -lj.L11(i, j);
  // enforce exact hermiticity of the assembled values
  return (g + g.adjoint()) / Real(2);
}

template <class Real>
Real pd_tolerance() {
  return std::is_same_v<Real, double> ? Real(1e-12) : Real(1e-15);
}

}  // namespace

template <class Real>
Real CurvatureTensor<Real>::symmetry_residual() const {
  Real scale = 0, worst = 0;
  for (const auto& c : r) scale = std::max(scale, std::abs(c));
  if (scale == Real(0)) return 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          worst = std::max(worst, std::abs(at(i, j, k, l) - at(k, j, i, l)));
          worst = std::max(worst, std::abs(at(i, j, k, l) - at(i, l, k, j)));
          worst = std::max(worst, std::abs(std::conj(at(i, j, k, l)) - at(j, i, l, k)));
        }
  return worst / scale;
}

template <class Real>
MetricTensor<Real> wp_metric(const GeometryContext& ctx, std::span<const std::complex<Real>> z,
                             bool require_positive) {
  ctx.model().require_in_domain(to_double_point(z));
  auto vals = ctx.pjet().template eval<Real>(z);
  LogJet<Real> lj(vals, ctx.model().vars());
  if (!(lj.h().real() > Real(0)))
    throw PositivityError("potential not positive at metric evaluation point",
                          to_double_point(z));
  MetricTensor<Real> out;
  out.point.assign(z.begin(), z.end());
  out.g = metric_matrix(lj);
  Eigen::SelfAdjointEigenSolver<MatX<Real>> es(out.g);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (require_positive) {
    Real scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(out.min_eigenvalue > pd_tolerance<Real>() * scale)) {
      std::vector<double> eigs;
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        eigs.push_back(double(es.eigenvalues()[i]));
      throw MetricError("metric not positive definite (degenerate slice or truncation too coarse)",
                        eigs);
    }
  }
  return out;
}

template <class Real>
HodgeDecomposition<Real> hodge_flag(const GeometryContext& ctx,
                                    std::span<const std::complex<Real>> z) {
  const VHSModel& model = ctx.model();
  const int n = model.weight(), b = model.rank(), m = model.vars();
  HodgeDecomposition<Real> dec;
  dec.weight = n;
  dec.rank = b;
  dec.flag.resize(n + 1);
  dec.flag_dims.assign(n + 1, 0);
  dec.hpq.resize(n + 1);

  // columns of derivatives grouped by total order
  std::vector<VecX<Real>> cols;
  std::vector<int> col_order;
  for (const auto& d : ctx.ojet().orders()) {
    int total = 0;
    for (int t : d) total += t;
    if (total > n) continue;
    auto v = ctx.ojet().series(d).template eval<Real>(z);
    VecX<Real> c(b);
    for (int p = 0; p < b; ++p) c[p] = v[p];
    cols.push_back(c);
    col_order.push_back(total);
  }

  auto orth_basis = [&](int max_order) {
    MatX<Real> A(b, 0);
    for (size_t c = 0; c < cols.size(); ++c) {
      if (col_order[c] > max_order) continue;
      A.conservativeResize(Eigen::NoChange, A.cols() + 1);
      A.col(A.cols() - 1) = cols[c];
    }
    Eigen::JacobiSVD<MatX<Real>> svd(A, Eigen::ComputeThinU);
    Real tol = svd.singularValues().size()
                   ? svd.singularValues()[0] * Real(1e-9) * std::max<Real>(1, b)
                   : Real(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > tol) ++rank;
    return MatX<Real>(svd.matrixU().leftCols(rank));
  };

  for (int p = n; p >= 0; --p) {
    dec.flag[p] = orth_basis(n - p);
    dec.flag_dims[p] = static_cast<int>(dec.flag[p].cols());
  }

  if (dec.flag_dims[n] != 1) throw FlagError("F^n is not a line", n);
  if (n >= 1 && dec.flag_dims[n - 1] != m + 1)
    throw FlagError("F^{n-1} does not have the immersive dimension m+1", n - 1);
  if (dec.flag_dims[0] != b) throw FlagError("derivatives do not span the fiber", 0);
  for (int p = 0; p <= n; ++p) {
    int q = n + 1 - p;
    int fq = (q >= 0 && q <= n) ? dec.flag_dims[q] : (q < 0 ? b : 0);
    if (dec.flag_dims[p] + fq != b)
      throw FlagError("flag is not opposed to its conjugate at p = " + std::to_string(p), p);
  }

  // H^{p,q} = F^p cap conj(F^q), q = n - p
  for (int p = 0; p <= n; ++p) {
    int q = n - p;
    const MatX<Real>& A = dec.flag[p];
    MatX<Real> B = dec.flag[q].conjugate();
    MatX<Real> S(b, A.cols() + B.cols());
    S.leftCols(A.cols()) = A;
    S.rightCols(B.cols()) = -B;
    Eigen::JacobiSVD<MatX<Real>> svd(S, Eigen::ComputeFullV);
    Real tol = svd.singularValues()[0] * Real(1e-9) * std::max<Real>(1, b);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > tol) ++rank;
    int nullity = static_cast<int>(S.cols()) - rank;
    int expect = dec.flag_dims[p] - (p + 1 <= n ? dec.flag_dims[p + 1] : 0);
    if (nullity != expect)
      throw FlagError("H^{p,q} dimension mismatch at p = " + std::to_string(p), p);
    MatX<Real> H(b, nullity);
    for (int t = 0; t < nullity; ++t) {
      VecX<Real> x = svd.matrixV().col(S.cols() - 1 - t).head(A.cols());
      H.col(t) = A * x;
    }
    if (nullity > 0) {
      Eigen::HouseholderQR<MatX<Real>> qr(H);
      MatX<Real> Q = qr.householderQ() * MatX<Real>::Identity(b, nullity);
      dec.hpq[p] = Q;
    } else {
      dec.hpq[p] = MatX<Real>(b, 0);
    }
  }

  // Weil-operator positivity: (-1)^q (u, conj u) > 0 on H^{p,q}
  for (int p = 0; p <= n; ++p) {
    int q = n - p;
    const MatX<Real>& H = dec.hpq[p];
    if (H.cols() == 0) continue;
    MatX<Real> Gm(H.cols(), H.cols());
    for (int a = 0; a < H.cols(); ++a)
      for (int c = 0; c < H.cols(); ++c) {
        std::vector<std::complex<Real>> u(H.rows()), v(H.rows());
        for (int t = 0; t < H.rows(); ++t) {
          u[t] = H(t, a);
          v[t] = H(t, c);
        }
        Gm(a, c) = pairing<Real>(ctx.model(), std::span<const std::complex<Real>>(u),
                                 std::span<const std::complex<Real>>(v));
      }
    if (q % 2 == 1) Gm = -Gm;
    Eigen::SelfAdjointEigenSolver<MatX<Real>> es((Gm + Gm.adjoint()) / Real(2));
    Real scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(es.eigenvalues().minCoeff() > Real(1e-9) * scale))
      throw FlagError("polarization form not positive on H^{p,q} at p = " + std::to_string(p), p);
  }
  return dec;
}

template <class Real>
VecX<Real> project_Hn22(const GeometryContext& ctx, const HodgeDecomposition<Real>& dec,
                        const VecX<Real>& v) {
  const int n = dec.weight, b = dec.rank;
  if (n < 2 || dec.hpq[n - 2].cols() == 0) return VecX<Real>::Zero(b);
  MatX<Real> full(b, b);
  int off = 0;
  std::vector<std::pair<int, int>> blocks;  // (p, offset)
  for (int p = n; p >= 0; --p) {
    int c = static_cast<int>(dec.hpq[p].cols());
    if (c == 0) continue;
    full.block(0, off, b, c) = dec.hpq[p];
    blocks.push_back({p, off});
    off += c;
  }
  if (off != b) throw FlagError("Hodge decomposition does not span the fiber", -1);
  VecX<Real> coef = full.colPivHouseholderQr().solve(v);
  VecX<Real> out = VecX<Real>::Zero(b);
  for (const auto& [p, o] : blocks) {
    if (p != n - 2) continue;
    int c = static_cast<int>(dec.hpq[p].cols());
    out = dec.hpq[p] * coef.segment(o, c);
  }
  return out;
}

template <class Real>
CurvatureTensor<Real> curvature_direct(const GeometryContext& ctx,
                                       std::span<const std::complex<Real>> z) {
  const int m = ctx.model().vars();
  auto vals = ctx.pjet().template eval<Real>(z);
  LogJet<Real> lj(vals, m);
  MatX<Real> G = metric_matrix(lj);
  MatX<Real> Ginv = G.inverse();

  // B_k(i,q) = d_k g_{i qbar}
  std::vector<MatX<Real>> B(m, MatX<Real>(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int q = 0; q < m; ++q) B[k](i, q) = -lj.L21(i, q, k);

  CurvatureTensor<Real> R;
  R.point.assign(z.begin(), z.end());
  R.m = m;
  R.r.assign(size_t(m) * m * m * m, {});
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      MatX<Real> corr = B[k] * Ginv * B[l].adjoint();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) R.at(i, j, k, l) = -lj.L22(i, j, k, l) - corr(i, j);
    }
  return R;
}

template <class Real>
CurvatureTensor<Real> strominger_curvature(const GeometryContext& ctx,
                                           std::span<const std::complex<Real>> z) {
  const VHSModel& model = ctx.model();
  const int m = model.vars(), b = model.rank();
  auto g = wp_metric<Real>(ctx, z);
  auto dec = hodge_flag<Real>(ctx, z);
  std::vector<std::complex<Real>> zz(z.begin(), z.end());
  Real h = potential<Real>(model, std::span<const std::complex<Real>>(zz));

  // Psi_{ki}: H^{n-2,2} component of d_k d_i Omega
  std::vector<VecX<Real>> psi(size_t(m) * m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      std::vector<int> d(m, 0);
      d[k] += 1;
      d[i] += 1;
      auto vv = ctx.ojet().series(d).template eval<Real>(z);
      VecX<Real> v(b);
      for (int p = 0; p < b; ++p) v[p] = vv[p];
      psi[size_t(k) * m + i] = project_Hn22<Real>(ctx, dec, v);
    }

  CurvatureTensor<Real> R;
  R.point.assign(z.begin(), z.end());
  R.m = m;
  R.r.assign(size_t(m) * m * m * m, {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const VecX<Real>& a = psi[size_t(k) * m + i];
          const VecX<Real>& c = psi[size_t(l) * m + j];
          std::vector<std::complex<Real>> u(a.data(), a.data() + b);
          std::vector<std::complex<Real>> w(c.data(), c.data() + b);
          auto proj = pairing<Real>(model, std::span<const std::complex<Real>>(u),
                                    std::span<const std::complex<Real>>(w));
          R.at(i, j, k, l) =
              g.g(i, j) * g.g(k, l) + g.g(i, l) * g.g(k, j) - proj / h;
        }
  return R;
}

template <class Real>
MatX<Real> ricci_contract(const MetricTensor<Real>& g, const CurvatureTensor<Real>& r) {
  const int m = r.m;
  MatX<Real> Ginv = g.g.inverse();
  MatX<Real> ric = MatX<Real>::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::complex<Real> acc{};
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) acc += Ginv(l, k) * r.at(i, j, k, l);
      ric(i, j) = -acc;
    }
  return ric;
}

template <class Real>
MatX<Real> ricci_direct(const GeometryContext& ctx, std::span<const std::complex<Real>> z) {
  const int m = ctx.model().vars();
  auto vals = ctx.pjet().template eval<Real>(z);
  LogJet<Real> lj(vals, m);
  MatX<Real> G = metric_matrix(lj);
  MatX<Real> Ginv = G.inverse();
  std::vector<MatX<Real>> B(m, MatX<Real>(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int q = 0; q < m; ++q) B[k](i, q) = -lj.L21(i, q, k);

  // Ric_{i jbar} = -tr(G^{-1} d_i dbar_j G) + tr(G^{-1} B_i G^{-1} B_j^H)
  MatX<Real> ric(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      MatX<Real> D(m, m);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) D(k, l) = -lj.L22(k, l, i, j);
      std::complex<Real> t1 = (Ginv * D).trace();
      std::complex<Real> t2 = (Ginv * B[i] * Ginv * B[j].adjoint()).trace();
      ric(i, j) = -t1 + t2;
    }
  return (ric + ric.adjoint()) / Real(2);
}

PoincareBoundReport poincare_bound_probe(const GeometryContext& ctx, const PoincareChart& chart,
                                         int radial_samples) {
  PoincareBoundReport rep;
  const int m = ctx.model().vars();
  const double theta = 0.4;
  for (int s = 0; s < radial_samples; ++s) {
    double expo = 5.0 + 45.0 * s / std::max(1, radial_samples - 1);
    double r = std::exp(-expo);
    std::vector<std::complex<double>> z(ctx.model().base_point());
    for (int j = 0; j < chart.punctures; ++j) z[j] = std::polar(r, theta + 0.2 * j);

    auto g = wp_metric<double>(ctx, std::span<const std::complex<double>>(z),
                               /*require_positive=*/false);
    auto P = local_poincare(chart, std::span<const std::complex<double>>(z));
    double gscale = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gscale = std::max(gscale, std::abs(g.g(i, j)));
    if (gscale == 0) {
      rep.samples.push_back({r, 0.0, 0.0});
      continue;
    }
    auto R = curvature_direct<double>(ctx, std::span<const std::complex<double>>(z));
    auto ric = ricci_contract<double>(g, R);

    Eigen::MatrixXcd A(m, m), C(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s2 = std::sqrt(P[i] * P[j]);
        A(i, j) = g.g(i, j) / s2;
        C(i, j) = ric(i, j) / s2;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A), ec(C);
    double c1 = ea.eigenvalues().maxCoeff();
    double c2 = ec.eigenvalues().cwiseAbs().maxCoeff();
    rep.samples.push_back({r, c1, c2});
    rep.c1 = std::max(rep.c1, c1);
    rep.c2 = std::max(rep.c2, c2);
  }
  if (rep.samples.size() >= 3) {
    const auto& a = rep.samples[rep.samples.size() - 3];
    const auto& b = rep.samples[rep.samples.size() - 2];
    const auto& c = rep.samples.back();
    auto close = [](double x, double y) {
      return std::abs(x - y) <= 0.05 * std::max({std::abs(x), std::abs(y), 1e-30});
    };
    rep.stabilized = close(a.c1, b.c1) && close(b.c1, c.c1) && close(a.c2, b.c2) &&
                     close(b.c2, c.c2);
  }
  return rep;
}

#define WPG_INSTANTIATE(Real)                                                                  \
  template struct CurvatureTensor<Real>;                                                       \
  template MetricTensor<Real> wp_metric<Real>(const GeometryContext&,                          \
                                              std::span<const std::complex<Real>>, bool);     \
  template HodgeDecomposition<Real> hodge_flag<Real>(const GeometryContext&,                   \
                                                     std::span<const std::complex<Real>>);    \
  template VecX<Real> project_Hn22<Real>(const GeometryContext&,                               \
                                         const HodgeDecomposition<Real>&, const VecX<Real>&); \
  template CurvatureTensor<Real> strominger_curvature<Real>(                                   \
      const GeometryContext&, std::span<const std::complex<Real>>);                           \
  template CurvatureTensor<Real> curvature_direct<Real>(const GeometryContext&,                \
                                                        std::span<const std::complex<Real>>); \
  template MatX<Real> ricci_contract<Real>(const MetricTensor<Real>&,                         \
                                           const CurvatureTensor<Real>&);                     \
  template MatX<Real> ricci_direct<Real>(const GeometryContext&,                              \
                                         std::span<const std::complex<Real>>);

WPG_INSTANTIATE(double)
WPG_INSTANTIATE(long double)

#undef WPG_INSTANTIATE

}  // namespace wpg
