#pragma once

// Dense truncated power series in r¹, …, rⁿ with real coefficients, closed
// under truncation at a total-degree cap D.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gkrs/error.hpp"

namespace gkrs {

class TruncatedSeries {
 public:
  using Exponents = std::vector<int>;

  TruncatedSeries() = default;
  TruncatedSeries(int nvars, int degree);

  static TruncatedSeries constant(int nvars, int degree, double value);
  /// The coordinate r^{var}.
  static TruncatedSeries variable(int nvars, int degree, int var);
  static TruncatedSeries monomial(int nvars, int degree, const Exponents& e, double coeff = 1.0);

  int nvars() const;
  int degree() const;
  /// Number of stored monomials, C(D + n, n).
  std::size_t size() const { return coeffs_.size(); }

  const Exponents& exponents(std::size_t idx) const;
  int total_degree(std::size_t idx) const;
  double operator[](std::size_t idx) const { return coeffs_[idx]; }
  double& operator[](std::size_t idx) { return coeffs_[idx]; }

  /// Coefficient of r^e; zero when |e| exceeds the cap.
  double coeff(const Exponents& e) const;
  void set_coeff(const Exponents& e, double value);
  double constant_term() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(double s);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, double s) { return a *= s; }
  friend TruncatedSeries operator*(double s, TruncatedSeries a) { return a *= s; }

  /// r^i ∂/∂r^i; exact integer scaling of exponents.
  TruncatedSeries euler(int var) const;
  /// ∂/∂r^i.  Top-degree coefficients of the result are zero, so the result is
  /// exact only through degree D − 1.
  TruncatedSeries partial(int var) const;
  /// r^i · this, truncated.
  TruncatedSeries times_variable(int var) const;
  /// Same coefficients under a new cap (dropping or zero-padding).
  TruncatedSeries with_degree(int degree) const;
  /// Insert a new variable at position `var` with exponent 0 everywhere.
  TruncatedSeries embed(int nvars, int var) const;
  /// Coefficient of (r^{var})^m as a series in the remaining variables, with
  /// cap D − m.
  TruncatedSeries slice(int var, int m) const;

  double evaluate(const std::vector<double>& r) const;
  double max_abs() const;
  bool bit_equal(const TruncatedSeries& o) const;

  const std::vector<double>& coeffs() const { return coeffs_; }

  struct Layout;

 private:
  friend TruncatedSeries series_mul(const TruncatedSeries&, const TruncatedSeries&);
  friend TruncatedSeries series_exp(const TruncatedSeries&);
  friend TruncatedSeries series_reciprocal(const TruncatedSeries&);
  void require_same_shape(const TruncatedSeries& o) const;

  std::shared_ptr<const Layout> layout_;
  std::vector<double> coeffs_;
};

/// Cauchy product truncated at the common cap.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
/// exp(a) through the cap, via d·y_d = [(E a)·y]_d with E the total-degree
/// Euler operator and the constant term factored out as e^{a₀}.
TruncatedSeries series_exp(const TruncatedSeries& a);
/// 1/a; requires a non-zero constant term.
TruncatedSeries series_reciprocal(const TruncatedSeries& a);

/// Determinant of a square matrix of series by Laplace expansion.
TruncatedSeries series_det(const std::vector<std::vector<TruncatedSeries>>& m);

}  // namespace gkrs
