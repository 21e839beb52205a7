#pragma once

#include <Eigen/Dense>

#include "wpg/model.hpp"
#include "wpg/poincare.hpp"

namespace wpg {

template <class Real>
using MatX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using VecX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

struct MetricError : ModelError {
  MetricError(const std::string& msg, std::vector<double> eigs)
      : ModelError(msg), eigenvalues(std::move(eigs)) {}
  std::vector<double> eigenvalues;
};

struct FlagError : ModelError {
  FlagError(const std::string& msg, int p) : ModelError(msg), failing_p(p) {}
  int failing_p;
};

template <class Real>
struct MetricTensor {
  std::vector<std::complex<Real>> point;
  MatX<Real> g;
  Real min_eigenvalue = 0;
};

template <class Real>
struct CurvatureTensor {
  std::vector<std::complex<Real>> point;
  int m = 0;
  std::vector<std::complex<Real>> r;  // R_{i jbar k lbar}, flattened

  std::complex<Real>& at(int i, int j, int k, int l) {
    return r[((size_t(i) * m + j) * m + k) * m + l];
  }
  const std::complex<Real>& at(int i, int j, int k, int l) const {
    return r[((size_t(i) * m + j) * m + k) * m + l];
  }
  // Largest violation of the Kaehler symmetries R_{ijkl}=R_{kjil}=R_{ilkj},
  // conj(R_{ijkl}) = R_{jilk}, relative to the largest component.
  Real symmetry_residual() const;
};

template <class Real>
struct HodgeDecomposition {
  int weight = 0, rank = 0;
  std::vector<int> flag_dims;     // dim F^p, p = 0..n
  std::vector<MatX<Real>> flag;   // flag[p]: orthonormal basis of F^p
  std::vector<MatX<Real>> hpq;    // hpq[p]: basis of H^{p, n-p}
};

// Bundles the exact derivative series a model needs for pointwise geometry.
class GeometryContext {
 public:
  explicit GeometryContext(const VHSModel& model)
      : model_(model),
        pjet_(model, 2, 2),
        ojet_(model, std::max(model.weight(), 2)) {}

  const VHSModel& model() const { return model_; }
  const PotentialJet& pjet() const { return pjet_; }
  const OmegaJet& ojet() const { return ojet_; }

 private:
  const VHSModel& model_;
  PotentialJet pjet_;
  OmegaJet ojet_;
};

// g_{i jbar} = -d_i dbar_j log (Omega, conj Omega), from the exact series.
template <class Real>
MetricTensor<Real> wp_metric(const GeometryContext& ctx,
                             std::span<const std::complex<Real>> z,
                             bool require_positive = true);

// Full flag F^p from derivative spans and H^{p,q} = F^p cap conj(F^q).
template <class Real>
HodgeDecomposition<Real> hodge_flag(const GeometryContext& ctx,
                                    std::span<const std::complex<Real>> z);

// Component of v in H^{n-2,2}; the zero vector when that bidegree is empty.
template <class Real>
VecX<Real> project_Hn22(const GeometryContext& ctx, const HodgeDecomposition<Real>& dec,
                        const VecX<Real>& v);

// Curvature by metric products minus the paired H^{n-2,2} projections of the
// second derivatives of Omega.
template <class Real>
CurvatureTensor<Real> strominger_curvature(const GeometryContext& ctx,
                                           std::span<const std::complex<Real>> z);

// Curvature from the potential alone: R = d dbar g - g^{-1} dg dbar g in
// index form, sign fixed so that Ric + 2m omega is nonnegative.
template <class Real>
CurvatureTensor<Real> curvature_direct(const GeometryContext& ctx,
                                       std::span<const std::complex<Real>> z);

// Ric_{i jbar} = -g^{k lbar} R_{i jbar k lbar}.
template <class Real>
MatX<Real> ricci_contract(const MetricTensor<Real>& g, const CurvatureTensor<Real>& r);

// Ric via -d dbar log det g assembled from the same jets (trace identity).
template <class Real>
MatX<Real> ricci_direct(const GeometryContext& ctx, std::span<const std::complex<Real>> z);

struct PoincareBoundSample {
  double radius;
  double c1;  // omega_WP vs omega_P
  double c2;  // |Ric| vs omega_P
};

struct PoincareBoundReport {
  double c1 = 0, c2 = 0;
  bool stabilized = false;
  std::vector<PoincareBoundSample> samples;
};

// Smallest constants with omega_WP <= c1 omega_P and -c2 omega_P <= Ric <= c2
// omega_P over a radial sample sweep toward the punctures.
PoincareBoundReport poincare_bound_probe(const GeometryContext& ctx, const PoincareChart& chart,
                                         int radial_samples);

}  // namespace wpg
