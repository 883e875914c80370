#pragma once

// Complex-differential-geometry kernel.
//
// Everything here works in a holomorphic chart z = (z^1, ..., z^n) with the
// conventions
//
//   g = g_{ij̄} dz^i ∘ dz̄^j,   Ω = (i/2) g_{ij̄} dz^i ∧ dz̄^j = (i/2) ∂∂̄φ,
//
// so g_{ij̄} = ∂²φ/∂z^i∂z̄^j.  A HermitianMatrix M stores M(i, j) = g_{ij̄};
// the inverse-metric component g^{ij̄} is (M⁻¹)(j, i).
//
// Derivatives are real finite differences converted to Wirtinger form,
// ∂/∂z = ½(∂/∂x − i∂/∂y) and ∂/∂z̄ = ½(∂/∂x + i∂/∂y).

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gkrs/error.hpp"

namespace gkrs {

using cplx = std::complex<double>;
using ComplexPoint = std::vector<cplx>;
using HermitianMatrix = Eigen::MatrixXcd;

using RealField = std::function<double(const ComplexPoint&)>;
using MetricField = std::function<HermitianMatrix(const ComplexPoint&)>;
using DomainPredicate = std::function<bool(const ComplexPoint&)>;

/// Finite-difference configuration.
///
/// First derivatives use the step rel_step·max(1, |z|).  Second derivatives
/// use sqrt(rel_step)·max(1, |z|): a 1e-5 step in a second difference leaves
/// ~1e-6 of rounding noise, far above the accuracy the metric checks need.
struct FDScheme {
  double rel_step = 1e-5;
  int order = 2;  // 2 or 4
  int richardson_levels = 1;

  void validate() const;
  double first_step(const ComplexPoint& z) const;
  double second_step(const ComplexPoint& z) const;
};

/// FDScheme with rel_step overridden by SOLITON_FD_STEP when that is set.
FDScheme scheme_from_env(FDScheme base = {});

struct WirtingerDerivs {
  std::vector<cplx> grad_z;
  std::vector<cplx> grad_zbar;
  HermitianMatrix hess_mixed;
};

struct VectorFieldSample {
  std::vector<cplx> Z;  // type-(1,0) components; Z = X − iY
};

struct RicciResult {
  double G = 0.0;  // log det g
  HermitianMatrix ricci;
  double scalar = 0.0;
};

double norm(const ComplexPoint& z);

/// (M + M*)/2.
HermitianMatrix hermitian_part(const HermitianMatrix& m);
bool is_positive_definite(const HermitianMatrix& m);

/// log det of a Hermitian positive-definite matrix.  Throws SingularMetric when
/// the matrix is not positive definite or its condition number exceeds 1e12.
double log_det_checked(const HermitianMatrix& m);

/// Σ g^{ij̄} A_{ij̄} = tr(M⁻¹ A), real part.
double metric_trace(const HermitianMatrix& g, const HermitianMatrix& a);

/// g_{ℓk̄} Z^ℓ Z̄^k, which equals 2|Z|² = |∇f|² in the real normalization.
double metric_norm_sq(const HermitianMatrix& g, const std::vector<cplx>& Z);

WirtingerDerivs wirtinger_derivs(const RealField& field, const ComplexPoint& z,
                                 const FDScheme& scheme = {},
                                 const DomainPredicate& domain = {});

/// Hermitian-symmetrized mixed Hessian of the potential.  Positive
/// definiteness is not enforced; callers use is_positive_definite().
HermitianMatrix metric_from_potential(const RealField& phi, const ComplexPoint& z,
                                      const FDScheme& scheme = {},
                                      const DomainPredicate& domain = {});

/// G = log det g, R_{ij̄} = −2 ∂²G/∂z^i∂z̄^j, R(g) = 2 g^{ij̄} R_{ij̄}.
RicciResult ricci_from_metric(const MetricField& g, const ComplexPoint& z,
                              const FDScheme& scheme = {},
                              const DomainPredicate& domain = {});

/// Z^ℓ = 2 ∂g^{ℓj̄}/∂z̄^j.
VectorFieldSample associated_Z(const MetricField& g, const ComplexPoint& z,
                               const FDScheme& scheme = {},
                               const DomainPredicate& domain = {});

/// ½(R(g) + g_{ℓk̄} Z^ℓ Z̄^k); constant (= h) on a gradient Kähler Ricci soliton.
double soliton_constant(const MetricField& g, const ComplexPoint& z,
                        const FDScheme& scheme = {},
                        const DomainPredicate& domain = {});

/// f = −log det g, valid in special coordinates (holomorphic volume form dz).
double ricci_potential_special(const MetricField& g, const ComplexPoint& z);

/// Δ_g F = 4 g^{ij̄} ∂²F/∂z^i∂z̄^j, the Riemannian Laplacian of g.
double laplacian(const RealField& field, const MetricField& g, const ComplexPoint& z,
                 const FDScheme& scheme = {}, const DomainPredicate& domain = {});

}  // namespace gkrs
