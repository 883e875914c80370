#pragma once

// Torus-invariant solitons φ = u(|z¹|², …, |zⁿ|²) as truncated power series.
//
// The reduced equation is
//   det(r^i ∂_i (r^j ∂_j u)) · exp(½ Σ h_j r^j ∂_j u) = r¹ ⋯ rⁿ,
// singular along every r^i = 0.  Prescribing u on t = rⁿ = 0 determines u
// uniquely as a formal series in t.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gkrs/ckgeom.hpp"
#include "gkrs/families.hpp"
#include "gkrs/series.hpp"

namespace gkrs {

/// Left side minus r¹⋯rⁿ, truncated at the cap of u.
TruncatedSeries ma_residual(const TruncatedSeries& u, const std::vector<double>& h);

struct ToricInitialData {
  TruncatedSeries v;  // n − 1 variables; v(0) = 0 and ∂v/∂r^i(0) > 0
  std::vector<double> h;
};

struct SolveDiagnostics {
  double max_coeff = 0.0;
  bool growth_warning = false;  // some |coefficient| exceeded 1e12
};

/// Order-by-order solution u = v + Σ_{m≥1} z_m(r¹, …, r^{n−1}) tᵐ with
/// u(0) = 0, satisfying ma_residual(u, h) = 0 through degree D.
TruncatedSeries solve_singular_ivp(const ToricInitialData& init, int degree,
                                   SolveDiagnostics* diag = nullptr);

struct ToricEval {
  double phi = 0.0;
  HermitianMatrix g;
  double f = 0.0;
};

/// Evaluates a series solution and its derivatives.  Derivative series are
/// built once, so repeated evaluation is cheap.
class ToricModel {
 public:
  ToricModel(TruncatedSeries u, std::vector<double> h, double trust_radius = 0.5);

  int dim() const { return u_.nvars(); }
  const TruncatedSeries& series() const { return u_; }
  const std::vector<double>& h() const { return h_; }
  double trust_radius() const { return trust_; }
  bool in_trust_region(const ComplexPoint& z) const;

  /// φ, g_{ij̄} = δ_ij u_i + z̄^i z^j u_ij and f = ½ Σ h_j r^j u_j.
  ToricEval eval(const ComplexPoint& z) const;
  /// ρ-jet: du[i] = r^i u_i, ddu(i, j) = r^i ∂_i (r^j u_j).
  ToricJet jet(const std::vector<double>& r) const;

  AnalyticFamily as_family() const;

 private:
  std::vector<double> radii(const ComplexPoint& z) const;

  TruncatedSeries u_;
  std::vector<double> h_;
  double trust_;
  std::vector<TruncatedSeries> du_;                // ∂_i u
  std::vector<std::vector<TruncatedSeries>> ddu_;  // ∂_i ∂_j u
  std::vector<TruncatedSeries> eu_;                // r^i ∂_i u
  std::vector<std::vector<TruncatedSeries>> eeu_;  // r^i ∂_i r^j ∂_j u
};

ToricEval toric_eval(const TruncatedSeries& u, const std::vector<double>& h, const ComplexPoint& z,
                     double trust_radius = 0.5);

// --- ρ-coordinates ---------------------------------------------------------

struct RhoSample {
  std::vector<double> rho;
  double u = 0.0;
  std::vector<double> du;  // ∂u/∂ρ^i
  Eigen::MatrixXd ddu;     // ∂²u/∂ρ^i∂ρ^j
};

struct RhoGraph {
  int dim = 0;
  std::vector<RhoSample> samples;
};

/// Samples a toric field at r^i = e^{ρ^i}.
RhoGraph rho_graph(const ToricField& field, int dim, const std::vector<std::vector<double>>& rhos);

/// Tensor grid of `count` points per axis on [lo, hi]ⁿ.
std::vector<std::vector<double>> rho_grid(int dim, double lo, double hi, int count);

// --- series files ----------------------------------------------------------

void write_series(std::ostream& os, const TruncatedSeries& s);
TruncatedSeries read_series(std::istream& is);
void save_series(const std::string& path, const TruncatedSeries& s);
TruncatedSeries load_series(const std::string& path);

}  // namespace gkrs
