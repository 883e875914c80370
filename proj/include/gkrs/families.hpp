#pragma once

// Closed-form gradient Kähler Ricci solitons.
//
// Every family is emitted in special coordinates: the holomorphic volume form
// is dz¹∧⋯∧dzⁿ and Z = Σ h_i z^i ∂/∂z^i.  The Ricci potential is normalized by
// f(0) = 0, so f = −log det g + gauge_constant, where gauge_constant vanishes
// exactly when the family is in the |c| = 1 normalization (c_k = 2 for the
// cigar and its products).

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gkrs/ckgeom.hpp"

namespace gkrs {

/// Potential u of a torus-invariant family as a function of r^i = |z^i|²,
/// together with its Euler derivatives: du[i] = r^i ∂u/∂r^i and
/// ddu(i, j) = r^i ∂/∂r^i (r^j ∂u/∂r^j).  In ρ^i = log r^i these are the first
/// and second ρ-derivatives of u.
struct ToricJet {
  double u = 0.0;
  std::vector<double> du;
  Eigen::MatrixXd ddu;
};

using ToricField = std::function<ToricJet(const std::vector<double>& r)>;

struct AnalyticFamily {
  std::string name;
  int dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> params;

  RealField potential;
  MetricField metric;
  RealField ricci_potential;
  ToricField toric;  // empty when the family has no toric description
  DomainPredicate in_domain;

  std::vector<double> z_eigen;  // Z = Σ z_eigen[i] z^i ∂/∂z^i
  double soliton_h = 0.0;
  double gauge_constant = 0.0;
  bool special_coordinates = true;

  /// Z^i = h_i z^i.
  std::vector<cplx> vector_field(const ComplexPoint& z) const;
  void require_in_domain(const ComplexPoint& z) const;
};

AnalyticFamily make_cigar(double c, double h);
AnalyticFamily make_product(const std::vector<double>& c, const std::vector<double>& h);

/// Riemannian product of families; potentials, Ricci potentials and gauge
/// constants add, metrics are block diagonal.
AnalyticFamily cartesian_product(const std::vector<AnalyticFamily>& factors);

/// Cigar metric coefficient 2/(c + h|w|²) under the Ricci flow g_t = −2 Ric,
/// computed in closed form and as the pullback of g₀ by w ↦ e^{−ht}w.
struct FlowComparison {
  double evolved = 0.0;
  double pulled_back = 0.0;
};
FlowComparison cigar_flow_pullback(double c, double h, double t, cplx w);

// --- Cao's U(n)-invariant soliton -------------------------------------------

struct CaoF {
  double F = 0.0;
  double f = 0.0;  // F = f^n / n, sign(f) = sign(b)
};

/// F(b) = (−1)ⁿ (n−1)! e^b (e^{−b} − Σ_{k<n} (−b)^k/k!) and its n-th root f.
CaoF cao_F(int n, double b);

struct CaoPoint {
  double a = 1.0;
  double b = 0.0;
  double b_prime = 0.0;
};

/// Radial profile of Cao's soliton for Z = h_axis Σ z^k ∂/∂z^k.
///
/// b solves f(b(r)) = (h_axis/2) r, a = 2b/(h_axis r) with a(0) = 1, and
/// b′ = (h_axis/2) e^{−b} a^{1−n}.  The metric is a δ_ij + a′ z̄^i z^j and the
/// Ricci potential is b.
class CaoProfile {
 public:
  CaoProfile(int n, double h_axis);

  int n() const { return n_; }
  double h_axis() const { return h_; }
  /// +∞ for h_axis > 0, otherwise −(2/h)·(n!)^{1/n}.
  double r_max() const { return r_max_; }
  bool contains(double r) const { return r >= 0.0 && r < r_max_; }

  CaoPoint at(double r) const;
  double b(double r) const;
  double a(double r) const;
  /// r·a′(r) = e^{−b} a^{1−n} − a, computed without dividing by r.
  double r_a_prime(double r) const;
  double a_prime(double r) const;
  /// P(r) = ∫₀ʳ a, so that φ = P(|z|²) is a Kähler potential.
  double potential(double r) const;

 private:
  void require(double r) const;
  int n_;
  double h_;
  double r_max_;
};

CaoPoint cao_profile(int n, double h_axis, double r);

AnalyticFamily make_cao(int n, double h_axis);

}  // namespace gkrs
