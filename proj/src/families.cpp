#include "gkrs/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "gkrs/dilog.hpp"

namespace gkrs {

namespace {

double radius_sq(const cplx& w) { return std::norm(w); }

// log1p(x)/x, continuous at 0.
double log1p_ratio(double x) { return x == 0.0 ? 1.0 : std::log1p(x) / x; }

// Li₂(x)/x, continuous at 0.
double dilog_ratio(double x) { return x == 0.0 ? 1.0 : dilog(x) / x; }

// One-dimensional factor 2|dw|²/(c + h|w|²) with potential
// u(r) = −(2/h) Li₂(−hr/c).
double cigar_metric(double c, double h, double r) { return 2.0 / (c + h * r); }
double cigar_potential(double c, double h, double r) { return 2.0 * r / c * dilog_ratio(-h * r / c); }
double cigar_f(double c, double h, double r) { return std::log1p(h * r / c); }
double cigar_du(double c, double h, double r) { return 2.0 * r / c * log1p_ratio(h * r / c); }
double cigar_ddu(double c, double h, double r) { return 2.0 * r / (c + h * r); }

void check_product_params(const std::vector<double>& c, const std::vector<double>& h) {
  if (c.empty() || c.size() != h.size()) {
    throw Error(Errc::InvalidParam, "c and h must be non-empty and of equal length");
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!(c[k] > 0.0) || !std::isfinite(c[k])) throw Error(Errc::InvalidParam, "every c_k must be > 0");
    if (!std::isfinite(h[k])) throw Error(Errc::InvalidParam, "every h_k must be finite");
  }
}

void check_dim(const ComplexPoint& z, int dim) {
  if (static_cast<int>(z.size()) != dim) {
    throw Error(Errc::ShapeMismatch, "point has " + std::to_string(z.size()) + " coordinates, family has " +
                                         std::to_string(dim));
  }
}

// --- Cao: F(b) = bⁿ e^b S(b)/n with S(b) = n!·Σ_{k≥n} (−1)^{k−n} b^{k−n}/k!.
// S > 0 for every real b and S(0) = 1.

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double cao_log_S(int n, double b) {
  if (std::abs(b) < 1.0) {
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < 200; ++j) {
      term *= -b / static_cast<double>(n + j);
      sum += term;
      if (std::abs(term) <= 1e-17 * sum) break;
    }
    return std::log(sum);
  }
  // Σ_{k<n} (−b)^k/k!
  double poly = 0.0, term = 1.0;
  for (int k = 0; k < n; ++k) {
    poly += term;
    term *= -b / static_cast<double>(k + 1);
  }
  double log_abs_T;
  if (b > 0.0) {
    log_abs_T = std::log(std::abs(std::exp(-b) - poly));
  } else {
    // T = (−1)ⁿ e^{|b|} (1 − e^{b}·poly), poly > 0 here.
    log_abs_T = -b + std::log1p(-std::exp(b) * poly);
  }
  return log_factorial(n) + log_abs_T - n * std::log(std::abs(b));
}

double cao_f_of_b(int n, double b) {
  if (b == 0.0) return 0.0;
  return b * std::exp((b + cao_log_S(n, b)) / n);
}

double cao_f_prime(int n, double b) {
  return std::exp((b - (n - 1) * cao_log_S(n, b)) / n);
}

double cao_f_limit(int n) { return -std::exp(log_factorial(n) / n); }

// b with f(b) = y.
double cao_invert(int n, double y) {
  if (y == 0.0) return 0.0;
  if (!(y > cao_f_limit(n))) throw Error(Errc::OutOfDomain, "f(b) = y has no solution below −(n!)^{1/n}");
  // f(b) ≥ b on ℝ, so the root lies below y.
  double lo, hi = y;
  if (y > 0.0) {
    lo = 0.0;
  } else {
    lo = std::min(-1.0, 2.0 * y);
    while (cao_f_of_b(n, lo) >= y) lo *= 2.0;
  }
  double b;
  if (std::abs(y) < 0.5) {
    const double np1 = n + 1.0;
    const double beta = (3.0 * n + 5.0) / (2.0 * (n + 2.0) * np1 * np1);
    b = y - y * y / np1 + beta * y * y * y;
  } else if (y > 2.0) {
    const double ly = n * std::log(y);
    b = ly - std::log(static_cast<double>(n)) - (n - 1) * std::log(std::max(1.0, ly));
  } else {
    b = 0.5 * (lo + hi);
  }
  if (!(b > lo && b < hi)) b = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = cao_f_of_b(n, b) - y;
    if (r == 0.0) break;
    (r > 0.0 ? hi : lo) = b;
    double next = b - r / cao_f_prime(n, b);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - b) <= 1e-15 * std::abs(next);
    b = next;
    if (done || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b)) break;
  }
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<cplx> AnalyticFamily::vector_field(const ComplexPoint& z) const {
  check_dim(z, dim);
  std::vector<cplx> Z(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) Z[i] = z_eigen[i] * z[i];
  return Z;
}

void AnalyticFamily::require_in_domain(const ComplexPoint& z) const {
  check_dim(z, dim);
  if (in_domain && !in_domain(z)) throw Error(Errc::OutOfDomain, "point outside the domain of " + name);
}

AnalyticFamily make_product(const std::vector<double>& c, const std::vector<double>& h) {
  check_product_params(c, h);
  const int n = static_cast<int>(c.size());
  AnalyticFamily fam;
  fam.name = "product";
  fam.dim = n;
  fam.params = {{"c", c}, {"h", h}};
  fam.z_eigen = h;
  fam.soliton_h = std::accumulate(h.begin(), h.end(), 0.0);
  for (int k = 0; k < n; ++k) fam.gauge_constant += std::log(2.0 / c[k]);

  fam.in_domain = [c, h, n](const ComplexPoint& z) {
    if (static_cast<int>(z.size()) != n) return false;
    for (int k = 0; k < n; ++k) {
      if (!(c[k] + h[k] * radius_sq(z[k]) > 0.0)) return false;
    }
    return true;
  };
  const auto guard = fam.in_domain;
  fam.metric = [c, h, n, guard](const ComplexPoint& z) {
    if (!guard(z)) throw Error(Errc::OutOfDomain, "product metric evaluated outside c_k + h_k|z^k|² > 0");
    HermitianMatrix g = HermitianMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) g(k, k) = cigar_metric(c[k], h[k], radius_sq(z[k]));
    return g;
  };
  fam.potential = [c, h, n, guard](const ComplexPoint& z) {
    if (!guard(z)) throw Error(Errc::OutOfDomain, "product potential evaluated outside its domain");
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += cigar_potential(c[k], h[k], radius_sq(z[k]));
    return s;
  };
  fam.ricci_potential = [c, h, n, guard](const ComplexPoint& z) {
    if (!guard(z)) throw Error(Errc::OutOfDomain, "product Ricci potential evaluated outside its domain");
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += cigar_f(c[k], h[k], radius_sq(z[k]));
    return s;
  };
  fam.toric = [c, h, n](const std::vector<double>& r) {
    if (static_cast<int>(r.size()) != n) throw Error(Errc::ShapeMismatch, "toric jet needs one r per axis");
    ToricJet jet;
    jet.du.resize(n);
    jet.ddu = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      if (!(r[k] >= 0.0) || !(c[k] + h[k] * r[k] > 0.0)) {
        throw Error(Errc::OutOfDomain, "toric jet evaluated outside the domain");
      }
      jet.u += cigar_potential(c[k], h[k], r[k]);
      jet.du[k] = cigar_du(c[k], h[k], r[k]);
      jet.ddu(k, k) = cigar_ddu(c[k], h[k], r[k]);
    }
    return jet;
  };
  return fam;
}

AnalyticFamily make_cigar(double c, double h) {
  AnalyticFamily fam = make_product({c}, {h});
  fam.name = "cigar";
  fam.params = {{"c", {c}}, {"h", {h}}};
  return fam;
}

AnalyticFamily cartesian_product(const std::vector<AnalyticFamily>& factors) {
  if (factors.empty()) throw Error(Errc::InvalidParam, "empty product");
  AnalyticFamily fam;
  fam.name = "product";
  std::vector<int> offsets;
  bool toric = true;
  for (const auto& f : factors) {
    offsets.push_back(fam.dim);
    fam.dim += f.dim;
    fam.z_eigen.insert(fam.z_eigen.end(), f.z_eigen.begin(), f.z_eigen.end());
    fam.soliton_h += f.soliton_h;
    fam.gauge_constant += f.gauge_constant;
    fam.special_coordinates = fam.special_coordinates && f.special_coordinates;
    toric = toric && static_cast<bool>(f.toric);
    for (const auto& p : f.params) fam.params.push_back({f.name + "." + p.first, p.second});
  }
  const int dim = fam.dim;
  auto block = [factors, offsets](std::size_t k, const ComplexPoint& z) {
    return ComplexPoint(z.begin() + offsets[k], z.begin() + offsets[k] + factors[k].dim);
  };
  fam.in_domain = [factors, block, dim](const ComplexPoint& z) {
    if (static_cast<int>(z.size()) != dim) return false;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (factors[k].in_domain && !factors[k].in_domain(block(k, z))) return false;
    }
    return true;
  };
  fam.metric = [factors, offsets, block, dim](const ComplexPoint& z) {
    HermitianMatrix g = HermitianMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      g.block(offsets[k], offsets[k], factors[k].dim, factors[k].dim) = factors[k].metric(block(k, z));
    }
    return g;
  };
  fam.potential = [factors, block](const ComplexPoint& z) {
    double s = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) s += factors[k].potential(block(k, z));
    return s;
  };
  fam.ricci_potential = [factors, block](const ComplexPoint& z) {
    double s = 0.0;
    for (std::size_t k = 0; k < factors.size(); ++k) s += factors[k].ricci_potential(block(k, z));
    return s;
  };
  if (toric) {
    fam.toric = [factors, offsets, dim](const std::vector<double>& r) {
      ToricJet jet;
      jet.du.resize(dim);
      jet.ddu = Eigen::MatrixXd::Zero(dim, dim);
      for (std::size_t k = 0; k < factors.size(); ++k) {
        const int d = factors[k].dim, o = offsets[k];
        const ToricJet part = factors[k].toric(std::vector<double>(r.begin() + o, r.begin() + o + d));
        jet.u += part.u;
        std::copy(part.du.begin(), part.du.end(), jet.du.begin() + o);
        jet.ddu.block(o, o, d, d) = part.ddu;
      }
      return jet;
    };
  }
  return fam;
}

FlowComparison cigar_flow_pullback(double c, double h, double t, cplx w) {
  if (!(c > 0.0)) throw Error(Errc::InvalidParam, "c must be > 0");
  const double r = std::norm(w);
  const double ct = std::exp(2.0 * h * t) * c;
  if (!(ct + h * r > 0.0)) throw Error(Errc::OutOfDomain, "w outside the domain of the evolved metric");
  const cplx w0 = std::exp(-h * t) * w;
  if (!(c + h * std::norm(w0) > 0.0)) throw Error(Errc::OutOfDomain, "pulled-back point outside the domain");
  FlowComparison out;
  out.evolved = 2.0 / (ct + h * r);
  // |d(e^{−ht}w)/dw|² · g₀(e^{−ht}w)
  out.pulled_back = std::exp(-2.0 * h * t) * cigar_metric(c, h, std::norm(w0));
  return out;
}

// --- Cao ---------------------------------------------------------------------

CaoF cao_F(int n, double b) {
  if (n < 1) throw Error(Errc::InvalidParam, "n must be >= 1");
  if (std::isnan(b)) throw Error(Errc::NonFinite, "b is NaN");
  CaoF out;
  if (b == 0.0) return out;
  const double logS = cao_log_S(n, b);
  const double mag = std::exp(n * std::log(std::abs(b)) + b + logS) / n;
  out.F = (n % 2 == 1 && b < 0.0) ? -mag : mag;
  out.f = b * std::exp((b + logS) / n);
  return out;
}

CaoProfile::CaoProfile(int n, double h_axis) : n_(n), h_(h_axis) {
  if (n < 1) throw Error(Errc::InvalidParam, "n must be >= 1");
  if (h_axis == 0.0 || !std::isfinite(h_axis)) throw Error(Errc::InvalidParam, "h_axis must be finite and non-zero");
  r_max_ = h_axis > 0.0 ? std::numeric_limits<double>::infinity() : -(2.0 / h_axis) * -cao_f_limit(n);
}

void CaoProfile::require(double r) const {
  if (!(r >= 0.0) || !(r < r_max_)) {
    throw Error(Errc::OutOfDomain, "r = " + std::to_string(r) + " outside [0, " + std::to_string(r_max_) + ")");
  }
}

double CaoProfile::b(double r) const {
  require(r);
  return cao_invert(n_, 0.5 * h_ * r);
}

double CaoProfile::a(double r) const {
  const double y = 0.5 * h_ * r;
  const double bv = b(r);
  return y == 0.0 ? 1.0 : bv / y;
}

CaoPoint CaoProfile::at(double r) const {
  CaoPoint p;
  const double y = 0.5 * h_ * r;
  p.b = b(r);
  p.a = y == 0.0 ? 1.0 : p.b / y;
  p.b_prime = 0.5 * h_ * std::exp(-p.b) * std::pow(p.a, 1 - n_);
  return p;
}

double CaoProfile::r_a_prime(double r) const {
  const CaoPoint p = at(r);
  return std::exp(-p.b) * std::pow(p.a, 1 - n_) - p.a;
}

double CaoProfile::a_prime(double r) const {
  const double y = 0.5 * h_ * r;
  if (std::abs(y) < 1e-6) {
    require(r);
    const double np1 = n_ + 1.0;
    const double beta = (3.0 * n_ + 5.0) / (2.0 * (n_ + 2.0) * np1 * np1);
    return 0.5 * h_ * (-1.0 / np1 + 2.0 * beta * y);
  }
  return r_a_prime(r) / r;
}

double CaoProfile::potential(double r) const {
  const double bv = b(r);
  if (bv == 0.0) return 0.0;
  // P(r) = (2/h) ∫₀^{b(r)} β f′(β)/f(β) dβ and β f′/f = 1/S(β).
  const int n = n_;
  auto integrand = [n](double beta) { return std::exp(-cao_log_S(n, beta)); };
  constexpr int panels = 8;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = bv * k / panels, hi = bv * (k + 1) / panels;
    sum += boost::math::quadrature::gauss<double, 30>::integrate(integrand, lo, hi);
  }
  return 2.0 / h_ * sum;
}

CaoPoint cao_profile(int n, double h_axis, double r) { return CaoProfile(n, h_axis).at(r); }

AnalyticFamily make_cao(int n, double h_axis) {
  const CaoProfile prof(n, h_axis);
  AnalyticFamily fam;
  fam.name = "cao";
  fam.dim = n;
  fam.params = {{"n", {static_cast<double>(n)}}, {"h", {h_axis}}};
  fam.z_eigen.assign(n, h_axis);
  fam.soliton_h = n * h_axis;

  auto rsum = [](const ComplexPoint& z) {
    double s = 0.0;
    for (const auto& w : z) s += std::norm(w);
    return s;
  };
  fam.in_domain = [prof, rsum, n](const ComplexPoint& z) {
    return static_cast<int>(z.size()) == n && prof.contains(rsum(z));
  };
  fam.metric = [prof, rsum, n](const ComplexPoint& z) {
    check_dim(z, n);
    const double r = rsum(z);
    const CaoPoint p = prof.at(r);
    HermitianMatrix g = p.a * HermitianMatrix::Identity(n, n);
    if (r > 0.0) {
      const double ra1 = std::exp(-p.b) * std::pow(p.a, 1 - n) - p.a;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) += ra1 * std::conj(z[i]) * z[j] / r;
      }
    }
    return g;
  };
  fam.potential = [prof, rsum, n](const ComplexPoint& z) {
    check_dim(z, n);
    return prof.potential(rsum(z));
  };
  fam.ricci_potential = [prof, rsum, n](const ComplexPoint& z) {
    check_dim(z, n);
    return prof.b(rsum(z));
  };
  fam.toric = [prof, n](const std::vector<double>& r) {
    if (static_cast<int>(r.size()) != n) throw Error(Errc::ShapeMismatch, "toric jet needs one r per axis");
    double R = 0.0;
    for (double v : r) {
      if (!(v >= 0.0)) throw Error(Errc::OutOfDomain, "r^i must be >= 0");
      R += v;
    }
    const double a = prof.a(R), a1 = prof.a_prime(R);
    ToricJet jet;
    jet.u = prof.potential(R);
    jet.du.resize(n);
    jet.ddu.resize(n, n);
    for (int i = 0; i < n; ++i) {
      jet.du[i] = r[i] * a;
      for (int j = 0; j < n; ++j) jet.ddu(i, j) = (i == j ? r[i] * a : 0.0) + r[i] * r[j] * a1;
    }
    return jet;
  };
  return fam;
}

}  // namespace gkrs
