#pragma once

// Named numerical checks of soliton identities.  Each check samples a grid,
// records the deviation from the expected value at every point, and passes
// exactly when the largest deviation is within tolerance.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "gkrs/ckgeom.hpp"
#include "gkrs/families.hpp"
#include "gkrs/toric.hpp"

namespace gkrs {

/// Samples of one coordinate: a re_count × im_count lattice in the box
/// [re_lo, re_hi] × [im_lo, im_hi].
struct GridAxis {
  double re_lo = 0.0, re_hi = 0.0;
  int re_count = 1;
  double im_lo = 0.0, im_hi = 0.0;
  int im_count = 1;
};

struct GridSpec {
  std::vector<GridAxis> axes;         // tensor product over coordinates
  std::vector<ComplexPoint> explicit_points;  // used instead when axes is empty

  /// Every axis is re ∈ [lo, hi] with `count` samples at fixed imaginary part.
  static GridSpec box(int dim, double lo, double hi, int count, double im = 0.0);
  /// count × count lattice on [−half, half]² in the plane of one coordinate.
  static GridSpec square(double half, int count);
  static GridSpec points(std::vector<ComplexPoint> pts);

  std::vector<ComplexPoint> samples() const;
  std::size_t size() const;
  std::string summary() const;
};

struct ReportDetail {
  std::string where;
  double value = 0.0;
  double deviation = 0.0;
};

struct VerificationReport {
  std::string check_name;
  std::string grid;
  std::size_t points = 0;
  double max_dev = 0.0;
  double mean_dev = 0.0;
  double mean_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<ReportDetail> details;  // worst offenders, at most 10
};

/// Folds per-point (value, deviation) pairs into a report.
VerificationReport make_report(std::string name, std::string grid, double tolerance,
                               const std::vector<std::string>& where, const std::vector<double>& values,
                               const std::vector<double>& devs);

std::string point_label(const ComplexPoint& z);

/// Evaluates fn(i) for i < count on a pool of threads; results keep input
/// order and the first exception (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errs(count);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// --- checks --------------------------------------------------------------

/// ½(R + |∇f|²) against the family's soliton constant.
VerificationReport check_conservation(const AnalyticFamily& fam, const GridSpec& grid,
                                      const FDScheme& scheme = {}, double tol = 1e-6);

struct ResidualReports {
  VerificationReport monge_ampere;  // |det(φ_{ij̄}) e^{½dφ(X)} e^{−gauge} − 1|
  VerificationReport y_invariance;  // |dφ(Y)|
  bool pass() const { return monge_ampere.pass && y_invariance.pass; }
};

ResidualReports check_soliton_residual(const AnalyticFamily& fam, const GridSpec& grid,
                                       const FDScheme& scheme = {}, double tol_ma = 1e-8,
                                       double tol_y = 1e-8);
ResidualReports check_soliton_residual(const TruncatedSeries& u, const std::vector<double>& h,
                                       const GridSpec& grid, const FDScheme& scheme = {},
                                       double tol_ma = 1e-8, double tol_y = 1e-8);

struct GrowthReport {
  std::vector<std::vector<cplx>> directions;  // unit vectors
  std::vector<double> radii;
  std::vector<std::vector<double>> ratios;    // f(s·d)/log s, per direction and radius
  std::vector<double> asymptotic_ratio;       // slope of f against log s over the last two radii
  std::vector<std::vector<double>> grad_f_sq; // |∇f|² at each sample
  double mu_min = 0.0, mu_max = 0.0;          // over asymptotic ratios
  double lambda_min = 0.0, lambda_max = 0.0;  // over the outermost |∇f|² samples
  double target = 0.0;                        // 2n
  double tolerance = 0.1;
  bool bracket_pass = false;                  // mu_min ≤ 2n + tol and mu_max ≥ 2n − tol
  bool lambda_pass = false;                   // λ̂₋/h_max ≤ μ̂₋ + tol and μ̂₊ ≤ λ̂₊/h_min + tol
  bool pass = false;
};

/// Geometric radii 10¹ … 10⁶, 12 points.
std::vector<double> default_growth_radii();

GrowthReport check_growth(const AnalyticFamily& fam, const std::vector<std::vector<cplx>>& directions,
                          const std::vector<double>& radii = default_growth_radii(), double tol = 0.1);

/// Integrates ż = i·Z(z), with Z computed from the metric, over one period
/// 2π/h_axis (or `period` when positive) with fixed-step RK4.
VerificationReport check_periodic_orbit(const AnalyticFamily& fam, int axis, cplx z0,
                                        double period = 0.0, int steps = 10000,
                                        const FDScheme& scheme = {}, double tol = 1e-6);

/// Ricci tensor against (Φ_ε^* g − Φ_{−ε}^* g)/(2ε) for the flow Φ_t of Re Z,
/// Φ_t(z)^i = e^{h_i t/2} z^i.
VerificationReport check_lie_derivative(const AnalyticFamily& fam, const GridSpec& grid, double eps = 1e-4,
                                        const FDScheme& scheme = {}, double tol = 1e-5);

/// max |det(u_ij) e^{½Σ h_j u_j − gauge} − e^{Σρ}| / e^{Σρ} over the graph.
VerificationReport rho_residual(const RhoGraph& graph, const std::vector<double>& h, double tol = 1e-9,
                                double gauge = 0.0);

// --- affine symmetries of the ρ-graph -------------------------------------

struct AffineSymmetry {
  double s = 1.0;
  Eigen::MatrixXd A;  // A(i, j) = A_i^j
  Eigen::MatrixXd B;  // B(i, j) = B^i_j
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double c = 0.0;

  static AffineSymmetry identity(int n);
};

struct ConstraintCheck {
  std::string name;
  double deviation = 0.0;
  bool pass = false;
};

/// The four defining constraints, each with a relative tolerance of 1e-12.
std::vector<ConstraintCheck> check_affine_constraints(const AffineSymmetry& sym, const std::vector<double>& h);

/// ρ̄ = Bρ + b, ū = s u + (Bᵀa)·ρ + c, ū_i = (A∇u)_i + a_i, ū_ij = (A U B⁻¹)_ij.
RhoGraph apply_affine_symmetry(const AffineSymmetry& sym, const RhoGraph& graph, const std::vector<double>& h);

// --- perturbations for negative controls ----------------------------------

/// Adds eps·|z¹|⁴ to the potential (and 4·eps·|z¹|² to g_{11̄}).
AnalyticFamily perturb_quartic(const AnalyticFamily& fam, double eps);
/// Multiplies the Ricci potential by `factor`.
AnalyticFamily scale_ricci_potential(const AnalyticFamily& fam, double factor);
/// Multiplies the declared eigenvalues of Z (and the soliton constant).
AnalyticFamily scale_vector_field(const AnalyticFamily& fam, double factor);
/// Adds eps·(ρ¹)² to every sample of u (and the matching derivatives).
RhoGraph perturb_graph(const RhoGraph& graph, double eps);

}  // namespace gkrs
