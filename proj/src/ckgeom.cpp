#include "gkrs/ckgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace gkrs {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
bool finite(const Eigen::MatrixXcd& m) { return m.allFinite(); }

// Real coordinate k of z ∈ ℂⁿ: x_{k/2} for even k, y_{k/2} for odd k.
ComplexPoint shifted(const ComplexPoint& z, int k, double dk, int l = -1, double dl = 0.0) {
  ComplexPoint p = z;
  p[k / 2] += (k % 2 == 0) ? cplx(dk, 0.0) : cplx(0.0, dk);
  if (l >= 0) p[l / 2] += (l % 2 == 0) ? cplx(dl, 0.0) : cplx(0.0, dl);
  return p;
}

template <class F>
auto guarded(const F& f, const DomainPredicate& domain) {
  return [&f, &domain](const ComplexPoint& p) {
    if (domain && !domain(p)) {
      throw Error(Errc::DomainTooSmall, "finite-difference stencil leaves the domain");
    }
    auto v = f(p);
    if (!finite(v)) throw Error(Errc::NonFinite, "evaluator returned a non-finite value");
    return v;
  };
}

// Richardson tableau over step halvings; the leading error term is h^p0 and
// subsequent terms go up by h².
template <class V, class Est>
V richardson(const Est& est, double h, int p0, int levels) {
  std::vector<V> prev{est(h)};
  for (int k = 1; k <= levels; ++k) {
    std::vector<V> cur{est(h / std::ldexp(1.0, k))};
    for (int j = 1; j <= k; ++j) {
      const double factor = std::ldexp(1.0, p0 + 2 * (j - 1)) - 1.0;
      V next = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / factor;
      cur.push_back(std::move(next));
    }
    prev = std::move(cur);
  }
  return prev.back();
}

// ∂F/∂x_k for every real coordinate.
template <class V, class F>
std::vector<V> first_partials(const F& f, const ComplexPoint& z, const FDScheme& s) {
  const int dims = 2 * static_cast<int>(z.size());
  const double h0 = s.first_step(z);
  std::vector<V> out;
  out.reserve(dims);
  for (int k = 0; k < dims; ++k) {
    auto est = [&](double h) -> V {
      if (s.order == 2) {
        V d = f(shifted(z, k, h)) - f(shifted(z, k, -h));
        return d / (2.0 * h);
      }
      V d = f(shifted(z, k, -2 * h)) - 8.0 * f(shifted(z, k, -h)) + 8.0 * f(shifted(z, k, h)) -
            f(shifted(z, k, 2 * h));
      return d / (12.0 * h);
    };
    out.push_back(richardson<V>(est, h0, s.order, s.richardson_levels));
  }
  return out;
}

// Real Hessian ∂²F/∂x_k∂x_l of a scalar field.
template <class F>
Eigen::MatrixXd real_hessian(const F& f, const ComplexPoint& z, const FDScheme& s) {
  const int dims = 2 * static_cast<int>(z.size());
  const double h0 = s.second_step(z);
  Eigen::MatrixXd hess(dims, dims);
  const double f0 = f(z);
  static constexpr int offs[4] = {-2, -1, 1, 2};
  static constexpr double w4[4] = {1.0, -8.0, 8.0, -1.0};
  for (int k = 0; k < dims; ++k) {
    for (int l = k; l < dims; ++l) {
      auto est = [&](double h) -> double {
        if (k == l) {
          if (s.order == 2) {
            return (f(shifted(z, k, h)) - 2.0 * f0 + f(shifted(z, k, -h))) / (h * h);
          }
          return (-f(shifted(z, k, 2 * h)) + 16.0 * f(shifted(z, k, h)) - 30.0 * f0 +
                  16.0 * f(shifted(z, k, -h)) - f(shifted(z, k, -2 * h))) /
                 (12.0 * h * h);
        }
        if (s.order == 2) {
          return (f(shifted(z, k, h, l, h)) - f(shifted(z, k, h, l, -h)) -
                  f(shifted(z, k, -h, l, h)) + f(shifted(z, k, -h, l, -h))) /
                 (4.0 * h * h);
        }
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            acc += w4[a] * w4[b] * f(shifted(z, k, offs[a] * h, l, offs[b] * h));
          }
        }
        return acc / (144.0 * h * h);
      };
      hess(k, l) = hess(l, k) = richardson<double>(est, h0, s.order, s.richardson_levels);
    }
  }
  return hess;
}

HermitianMatrix mixed_from_real(const Eigen::MatrixXd& H, int n) {
  HermitianMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
      m(i, j) = 0.25 * cplx(H(xi, xj) + H(yi, yj), H(xi, yj) - H(yi, xj));
    }
  }
  return hermitian_part(m);
}

void require_nonempty(const ComplexPoint& z) {
  if (z.empty()) throw Error(Errc::InvalidParam, "point must have at least one coordinate");
  for (const auto& c : z) {
    if (!finite(c)) throw Error(Errc::NonFinite, "point has a non-finite coordinate");
  }
}

}  // namespace

void FDScheme::validate() const {
  if (!(rel_step > 0.0) || !std::isfinite(rel_step)) {
    throw Error(Errc::InvalidParam, "rel_step must be positive");
  }
  if (order != 2 && order != 4) throw Error(Errc::InvalidParam, "order must be 2 or 4");
  if (richardson_levels < 0) throw Error(Errc::InvalidParam, "richardson_levels must be >= 0");
}

double FDScheme::first_step(const ComplexPoint& z) const {
  return rel_step * std::max(1.0, norm(z));
}

double FDScheme::second_step(const ComplexPoint& z) const {
  return std::sqrt(rel_step) * std::max(1.0, norm(z));
}

FDScheme scheme_from_env(FDScheme base) {
  if (const char* env = std::getenv("SOLITON_FD_STEP")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw Error(Errc::ParseError, std::string("SOLITON_FD_STEP is not a positive number: ") + env);
    }
    base.rel_step = v;
  }
  base.validate();
  return base;
}

double norm(const ComplexPoint& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

HermitianMatrix hermitian_part(const HermitianMatrix& m) {
  HermitianMatrix out = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = cplx(out(i, i).real(), 0.0);
  return out;
}

bool is_positive_definite(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

double log_det_checked(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::SingularMetric, "eigen-decomposition failed");
  const auto& ev = es.eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0.0)) throw Error(Errc::SingularMetric, "metric is not positive definite");
  if (hi / lo > 1e12) throw Error(Errc::SingularMetric, "metric condition number exceeds 1e12");
  return ev.array().log().sum();
}

double metric_trace(const HermitianMatrix& g, const HermitianMatrix& a) {
  return (g.inverse() * a).trace().real();
}

double metric_norm_sq(const HermitianMatrix& g, const std::vector<cplx>& Z) {
  cplx acc = 0.0;
  for (std::size_t l = 0; l < Z.size(); ++l) {
    for (std::size_t k = 0; k < Z.size(); ++k) acc += g(l, k) * Z[l] * std::conj(Z[k]);
  }
  return acc.real();
}

WirtingerDerivs wirtinger_derivs(const RealField& field, const ComplexPoint& z,
                                 const FDScheme& scheme, const DomainPredicate& domain) {
  scheme.validate();
  require_nonempty(z);
  const auto f = guarded(field, domain);
  const int n = static_cast<int>(z.size());
  const auto d = first_partials<double>(f, z, scheme);
  WirtingerDerivs out;
  for (int i = 0; i < n; ++i) {
    out.grad_z.emplace_back(0.5 * d[2 * i], -0.5 * d[2 * i + 1]);
    out.grad_zbar.push_back(std::conj(out.grad_z.back()));
  }
  out.hess_mixed = mixed_from_real(real_hessian(f, z, scheme), n);
  return out;
}

HermitianMatrix metric_from_potential(const RealField& phi, const ComplexPoint& z,
                                      const FDScheme& scheme, const DomainPredicate& domain) {
  scheme.validate();
  require_nonempty(z);
  const auto f = guarded(phi, domain);
  return mixed_from_real(real_hessian(f, z, scheme), static_cast<int>(z.size()));
}

RicciResult ricci_from_metric(const MetricField& g, const ComplexPoint& z,
                              const FDScheme& scheme, const DomainPredicate& domain) {
  scheme.validate();
  require_nonempty(z);
  const RealField logdet = [&g](const ComplexPoint& p) { return log_det_checked(g(p)); };
  const auto G = guarded(logdet, domain);
  const int n = static_cast<int>(z.size());
  RicciResult out;
  const HermitianMatrix gz = g(z);
  out.G = log_det_checked(gz);
  out.ricci = hermitian_part(-2.0 * mixed_from_real(real_hessian(G, z, scheme), n));
  out.scalar = 2.0 * metric_trace(gz, out.ricci);
  return out;
}

VectorFieldSample associated_Z(const MetricField& g, const ComplexPoint& z,
                               const FDScheme& scheme, const DomainPredicate& domain) {
  scheme.validate();
  require_nonempty(z);
  const auto inv = [&g](const ComplexPoint& p) -> Eigen::MatrixXcd {
    const HermitianMatrix m = g(p);
    log_det_checked(m);
    return m.inverse();
  };
  const auto ginv = guarded(inv, domain);
  const int n = static_cast<int>(z.size());
  const auto d = first_partials<Eigen::MatrixXcd>(ginv, z, scheme);
  VectorFieldSample out;
  out.Z.assign(n, cplx(0.0));
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      // ∂/∂z̄^j (M⁻¹)(j, ℓ), times 2.
      out.Z[l] += d[2 * j](j, l) + cplx(0.0, 1.0) * d[2 * j + 1](j, l);
    }
  }
  return out;
}

double soliton_constant(const MetricField& g, const ComplexPoint& z, const FDScheme& scheme,
                        const DomainPredicate& domain) {
  const RicciResult ric = ricci_from_metric(g, z, scheme, domain);
  const VectorFieldSample Z = associated_Z(g, z, scheme, domain);
  return 0.5 * (ric.scalar + metric_norm_sq(g(z), Z.Z));
}

double ricci_potential_special(const MetricField& g, const ComplexPoint& z) {
  require_nonempty(z);
  return -log_det_checked(g(z));
}

double laplacian(const RealField& field, const MetricField& g, const ComplexPoint& z,
                 const FDScheme& scheme, const DomainPredicate& domain) {
  const WirtingerDerivs d = wirtinger_derivs(field, z, scheme, domain);
  return 4.0 * metric_trace(g(z), d.hess_mixed);
}

}  // namespace gkrs
