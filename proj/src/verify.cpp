#include "gkrs/verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

namespace gkrs {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw Error(Errc::InvalidParam, "grid counts must be >= 1");
  std::vector<double> v;
  for (int k = 0; k < count; ++k) v.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_points_in_domain(const AnalyticFamily& fam, const std::vector<ComplexPoint>& pts) {
  for (const auto& z : pts) {
    if (static_cast<int>(z.size()) != fam.dim) throw Error(Errc::ShapeMismatch, "grid dimension differs from the family");
    fam.require_in_domain(z);
  }
}

std::vector<std::string> labels(const std::vector<ComplexPoint>& pts) {
  std::vector<std::string> out;
  for (const auto& z : pts) out.push_back(point_label(z));
  return out;
}

}  // namespace

// --- grids -----------------------------------------------------------------

GridSpec GridSpec::box(int dim, double lo, double hi, int count, double im) {
  GridSpec g;
  for (int i = 0; i < dim; ++i) g.axes.push_back({lo, hi, count, im, im, 1});
  return g;
}

GridSpec GridSpec::square(double half, int count) {
  GridSpec g;
  g.axes.push_back({-half, half, count, -half, half, count});
  return g;
}

GridSpec GridSpec::points(std::vector<ComplexPoint> pts) {
  GridSpec g;
  g.explicit_points = std::move(pts);
  return g;
}

std::size_t GridSpec::size() const {
  if (axes.empty()) return explicit_points.size();
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.re_count < 1 || a.im_count < 1) throw Error(Errc::InvalidParam, "grid counts must be >= 1");
    n *= static_cast<std::size_t>(a.re_count) * a.im_count;
    if (n > 1000000) throw Error(Errc::InvalidParam, "grid exceeds 10^6 points");
  }
  return n;
}

std::vector<ComplexPoint> GridSpec::samples() const {
  if (axes.empty()) return explicit_points;
  size();
  std::vector<ComplexPoint> pts{{}};
  for (const auto& a : axes) {
    std::vector<cplx> vals;
    for (double x : linspace(a.re_lo, a.re_hi, a.re_count)) {
      for (double y : linspace(a.im_lo, a.im_hi, a.im_count)) vals.emplace_back(x, y);
    }
    std::vector<ComplexPoint> next;
    for (const auto& p : pts) {
      for (const auto& v : vals) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

std::string GridSpec::summary() const {
  if (axes.empty()) return std::to_string(explicit_points.size()) + " explicit points";
  std::string s;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto& a = axes[i];
    if (i) s += " x ";
    s += "z" + std::to_string(i + 1) + ": re[" + fmt(a.re_lo) + "," + fmt(a.re_hi) + "]/" +
         std::to_string(a.re_count) + " im[" + fmt(a.im_lo) + "," + fmt(a.im_hi) + "]/" + std::to_string(a.im_count);
  }
  return s;
}

std::string point_label(const ComplexPoint& z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) s += ", ";
    s += fmt(z[i].real());
    s += z[i].imag() < 0 ? "-" : "+";
    s += fmt(std::abs(z[i].imag())) + "i";
  }
  return s + ")";
}

VerificationReport make_report(std::string name, std::string grid, double tolerance,
                               const std::vector<std::string>& where, const std::vector<double>& values,
                               const std::vector<double>& devs) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.grid = std::move(grid);
  r.points = devs.size();
  r.tolerance = tolerance;
  if (!devs.empty()) {
    double worst = 0.0;
    bool nan = false;
    for (double d : devs) {
      if (std::isnan(d)) nan = true;
      worst = std::max(worst, d);
    }
    r.max_dev = nan ? std::numeric_limits<double>::quiet_NaN() : worst;
    r.mean_dev = std::accumulate(devs.begin(), devs.end(), 0.0) / devs.size();
    r.mean_value = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  }
  r.pass = r.max_dev <= tolerance;

  std::vector<std::size_t> order(devs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> key;
  for (double d : devs) key.push_back(std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  for (std::size_t k = 0; k < std::min<std::size_t>(10, order.size()); ++k) {
    const std::size_t i = order[k];
    r.details.push_back({where[i], values[i], devs[i]});
  }
  return r;
}

// --- conservation ----------------------------------------------------------

VerificationReport check_conservation(const AnalyticFamily& fam, const GridSpec& grid, const FDScheme& scheme,
                                      double tol) {
  const auto pts = grid.samples();
  require_points_in_domain(fam, pts);
  const auto values = parallel_map<double>(pts.size(), [&](std::size_t i) {
    return soliton_constant(fam.metric, pts[i], scheme, fam.in_domain);
  });
  std::vector<double> devs;
  for (double v : values) devs.push_back(std::abs(v - fam.soliton_h));
  return make_report("conservation", grid.summary(), tol, labels(pts), values, devs);
}

// --- Monge–Ampère residual -------------------------------------------------

ResidualReports check_soliton_residual(const AnalyticFamily& fam, const GridSpec& grid, const FDScheme& scheme,
                                       double tol_ma, double tol_y) {
  if (!fam.potential) throw Error(Errc::InvalidParam, "family has no potential");
  const auto pts = grid.samples();
  require_points_in_domain(fam, pts);
  struct Sample {
    double ma = 0.0, dev_ma = 0.0, dy = 0.0;
  };
  const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t i) {
    const auto d = wirtinger_derivs(fam.potential, pts[i], scheme, fam.in_domain);
    const auto Z = fam.vector_field(pts[i]);
    cplx dz = 0.0;
    for (std::size_t k = 0; k < Z.size(); ++k) dz += Z[k] * d.grad_z[k];
    Sample s;
    s.ma = d.hess_mixed.determinant().real() * std::exp(0.5 * dz.real() - fam.gauge_constant);
    s.dev_ma = std::abs(s.ma - 1.0);
    s.dy = -dz.imag();
    return s;
  });
  std::vector<double> ma, dev_ma, dy, dev_y;
  for (const auto& s : samples) {
    ma.push_back(s.ma);
    dev_ma.push_back(s.dev_ma);
    dy.push_back(s.dy);
    dev_y.push_back(std::abs(s.dy));
  }
  const auto where = labels(pts);
  return {make_report("residual.monge_ampere", grid.summary(), tol_ma, where, ma, dev_ma),
          make_report("residual.y_invariance", grid.summary(), tol_y, where, dy, dev_y)};
}

ResidualReports check_soliton_residual(const TruncatedSeries& u, const std::vector<double>& h, const GridSpec& grid,
                                       const FDScheme& scheme, double tol_ma, double tol_y) {
  return check_soliton_residual(ToricModel(u, h).as_family(), grid, scheme, tol_ma, tol_y);
}

// --- growth ----------------------------------------------------------------

std::vector<double> default_growth_radii() {
  std::vector<double> r;
  for (int k = 0; k < 12; ++k) r.push_back(std::pow(10.0, 1.0 + 5.0 * k / 11.0));
  r.back() = 1e6;
  return r;
}

GrowthReport check_growth(const AnalyticFamily& fam, const std::vector<std::vector<cplx>>& directions,
                          const std::vector<double>& radii, double tol) {
  if (fam.z_eigen.empty()) throw Error(Errc::InvalidParam, "family has no vector field eigenvalues");
  for (double hi : fam.z_eigen) {
    if (!(hi > 0.0)) throw Error(Errc::NonPositiveEigenvalue, "growth bounds need every h_i > 0");
  }
  if (radii.size() < 2) throw Error(Errc::InvalidParam, "growth check needs at least two radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 1.0) || (k && !(radii[k] > radii[k - 1]))) {
      throw Error(Errc::InvalidParam, "radii must be > 1 and strictly increasing");
    }
  }
  if (directions.empty()) throw Error(Errc::InvalidParam, "growth check needs at least one direction");

  GrowthReport rep;
  rep.radii = radii;
  rep.target = 2.0 * fam.dim;
  rep.tolerance = tol;
  for (const auto& d : directions) {
    if (static_cast<int>(d.size()) != fam.dim) throw Error(Errc::ShapeMismatch, "direction has the wrong length");
    const double len = norm(d);
    if (!(len > 0.0)) throw Error(Errc::InvalidParam, "direction must be nonzero");
    std::vector<cplx> unit;
    for (const auto& c : d) unit.push_back(c / len);
    rep.directions.push_back(unit);
  }

  const std::size_t K = radii.size();
  const auto rows = parallel_map<std::pair<std::vector<double>, std::vector<double>>>(
      rep.directions.size(), [&](std::size_t di) {
        std::vector<double> fvals, grads;
        for (double s : radii) {
          ComplexPoint z;
          for (const auto& c : rep.directions[di]) z.push_back(s * c);
          fam.require_in_domain(z);
          fvals.push_back(fam.ricci_potential(z));
          grads.push_back(metric_norm_sq(fam.metric(z), fam.vector_field(z)));
        }
        return std::make_pair(fvals, grads);
      });

  rep.lambda_min = std::numeric_limits<double>::infinity();
  rep.lambda_max = -std::numeric_limits<double>::infinity();
  rep.mu_min = std::numeric_limits<double>::infinity();
  rep.mu_max = -std::numeric_limits<double>::infinity();
  for (const auto& [fvals, grads] : rows) {
    std::vector<double> ratio;
    for (std::size_t k = 0; k < K; ++k) {
      ratio.push_back(fvals[k] / std::log(radii[k]));
      if (!std::isfinite(ratio.back())) throw Error(Errc::NonFinite, "growth ratio is not finite");
    }
    rep.ratios.push_back(ratio);
    const double mu = (fvals[K - 1] - fvals[K - 2]) / (std::log(radii[K - 1]) - std::log(radii[K - 2]));
    rep.asymptotic_ratio.push_back(mu);
    rep.grad_f_sq.push_back(grads);
    rep.mu_min = std::min(rep.mu_min, mu);
    rep.mu_max = std::max(rep.mu_max, mu);
    rep.lambda_min = std::min(rep.lambda_min, grads.back());
    for (double g : grads) rep.lambda_max = std::max(rep.lambda_max, g);
  }
  const auto [hmin, hmax] = std::minmax_element(fam.z_eigen.begin(), fam.z_eigen.end());
  rep.bracket_pass = rep.mu_min <= rep.target + tol && rep.mu_max >= rep.target - tol;
  rep.lambda_pass = rep.lambda_min / *hmax <= rep.mu_min + tol && rep.mu_max <= rep.lambda_max / *hmin + tol;
  rep.pass = rep.bracket_pass && rep.lambda_pass;
  return rep;
}

// --- periodic orbits -------------------------------------------------------

VerificationReport check_periodic_orbit(const AnalyticFamily& fam, int axis, cplx z0, double period, int steps,
                                        const FDScheme& scheme, double tol) {
  if (axis < 0 || axis >= fam.dim) throw Error(Errc::InvalidParam, "axis index out of range");
  if (z0 == cplx(0.0)) throw Error(Errc::InvalidParam, "orbit start must be off the origin");
  if (steps < 1) throw Error(Errc::InvalidParam, "steps must be >= 1");
  const double h = fam.z_eigen.at(axis);
  if (!(period > 0.0)) {
    if (h == 0.0) throw Error(Errc::InvalidParam, "axis eigenvalue is zero; the orbit is not periodic");
    period = 2.0 * std::numbers::pi / std::abs(h);
  }
  ComplexPoint start(fam.dim, cplx(0.0));
  start[axis] = z0;
  fam.require_in_domain(start);

  using Vec = Eigen::VectorXcd;
  const auto rhs = [&](const Vec& z) -> Vec {
    ComplexPoint p(z.data(), z.data() + z.size());
    const auto Z = associated_Z(fam.metric, p, scheme, fam.in_domain).Z;
    Vec out(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = cplx(0.0, 1.0) * Z[i];
    return out;
  };
  Vec z = Eigen::Map<const Vec>(start.data(), fam.dim);
  const double dt = period / steps;
  for (int k = 0; k < steps; ++k) {
    const Vec k1 = rhs(z);
    const Vec k2 = rhs(z + 0.5 * dt * k1);
    const Vec k3 = rhs(z + 0.5 * dt * k2);
    const Vec k4 = rhs(z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const double err = (z - Eigen::Map<const Vec>(start.data(), fam.dim)).norm();
  char grid[96];
  std::snprintf(grid, sizeof grid, "axis %d, T=%.17g, %d RK4 steps", axis + 1, period, steps);
  return make_report("orbits", grid, tol, {point_label(start)}, {err}, {err});
}

// --- Lie derivative --------------------------------------------------------

VerificationReport check_lie_derivative(const AnalyticFamily& fam, const GridSpec& grid, double eps,
                                        const FDScheme& scheme, double tol) {
  if (!(eps > 0.0)) throw Error(Errc::InvalidParam, "eps must be positive");
  const auto pts = grid.samples();
  require_points_in_domain(fam, pts);
  const int n = fam.dim;
  const auto pulled = [&](const ComplexPoint& z, double t) {
    ComplexPoint w = z;
    for (int i = 0; i < n; ++i) w[i] *= std::exp(0.5 * fam.z_eigen[i] * t);
    fam.require_in_domain(w);
    HermitianMatrix g = fam.metric(w);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) *= std::exp(0.5 * (fam.z_eigen[i] + fam.z_eigen[j]) * t);
    }
    return g;
  };
  struct Sample {
    double value = 0.0, dev = 0.0;
  };
  const auto samples = parallel_map<Sample>(pts.size(), [&](std::size_t k) {
    const auto ric = ricci_from_metric(fam.metric, pts[k], scheme, fam.in_domain).ricci;
    const HermitianMatrix lie = (pulled(pts[k], eps) - pulled(pts[k], -eps)) / (2.0 * eps);
    return Sample{ric.cwiseAbs().maxCoeff(), (ric - lie).cwiseAbs().maxCoeff()};
  });
  std::vector<double> values, devs;
  for (const auto& s : samples) {
    values.push_back(s.value);
    devs.push_back(s.dev);
  }
  return make_report("lie", grid.summary() + ", eps=" + fmt(eps), tol, labels(pts), values, devs);
}

// --- ρ-graphs --------------------------------------------------------------

VerificationReport rho_residual(const RhoGraph& graph, const std::vector<double>& h, double tol, double gauge) {
  if (static_cast<int>(h.size()) != graph.dim) throw Error(Errc::ShapeMismatch, "h length differs from the graph");
  std::vector<std::string> where;
  std::vector<double> values, devs;
  for (const auto& s : graph.samples) {
    double drift = 0.0, sum_rho = 0.0;
    for (int j = 0; j < graph.dim; ++j) {
      drift += 0.5 * h[j] * s.du[j];
      sum_rho += s.rho[j];
    }
    const double lhs = s.ddu.determinant() * std::exp(drift - gauge);
    const double rhs = std::exp(sum_rho);
    std::string w = "rho=(";
    for (int j = 0; j < graph.dim; ++j) w += (j ? "," : "") + fmt(s.rho[j]);
    where.push_back(w + ")");
    values.push_back(lhs / rhs);
    devs.push_back(std::abs(lhs - rhs) / rhs);
  }
  return make_report("rho", std::to_string(graph.samples.size()) + " rho samples", tol, where, values, devs);
}

AffineSymmetry AffineSymmetry::identity(int n) {
  AffineSymmetry s;
  s.A = Eigen::MatrixXd::Identity(n, n);
  s.B = Eigen::MatrixXd::Identity(n, n);
  s.a = Eigen::VectorXd::Zero(n);
  s.b = Eigen::VectorXd::Zero(n);
  return s;
}

std::vector<ConstraintCheck> check_affine_constraints(const AffineSymmetry& sym, const std::vector<double>& h) {
  const Eigen::Index n = static_cast<Eigen::Index>(h.size());
  if (sym.A.rows() != n || sym.A.cols() != n || sym.B.rows() != n || sym.B.cols() != n || sym.a.size() != n ||
      sym.b.size() != n) {
    throw Error(Errc::ShapeMismatch, "affine symmetry has the wrong shape");
  }
  constexpr double tol = 1e-12;
  const Eigen::VectorXd hv = Eigen::Map<const Eigen::VectorXd>(h.data(), n);
  std::vector<ConstraintCheck> out;
  const auto add = [&](std::string name, double dev, double scale) {
    out.push_back({std::move(name), dev, dev <= tol * std::max(1.0, scale)});
  };
  if (sym.s == 0.0) {
    out.push_back({"s_nonzero", 1.0, false});
  }
  const Eigen::MatrixXd duality = sym.A.transpose() * sym.B - sym.s * Eigen::MatrixXd::Identity(n, n);
  add("duality", duality.cwiseAbs().maxCoeff(), std::abs(sym.s));
  add("h_invariance", (sym.A.transpose() * hv - hv).cwiseAbs().maxCoeff(), hv.cwiseAbs().maxCoeff());
  add("unit_column_sums", (sym.B.colwise().sum().transpose() - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1.0);
  const double lhs = std::exp(0.5 * hv.dot(sym.a)) * sym.A.determinant();
  const double rhs = std::exp(sym.b.sum()) * sym.B.determinant();
  add("volume", std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
  return out;
}

RhoGraph apply_affine_symmetry(const AffineSymmetry& sym, const RhoGraph& graph, const std::vector<double>& h) {
  if (static_cast<int>(h.size()) != graph.dim) throw Error(Errc::ShapeMismatch, "h length differs from the graph");
  for (const auto& c : check_affine_constraints(sym, h)) {
    if (!c.pass) throw Error(Errc::ConstraintViolation, c.name + " constraint fails (deviation " + fmt(c.deviation) + ")");
  }
  const Eigen::MatrixXd Binv = sym.B.inverse();
  const Eigen::VectorXd Bta = sym.B.transpose() * sym.a;
  RhoGraph out;
  out.dim = graph.dim;
  for (const auto& s : graph.samples) {
    const Eigen::VectorXd rho = Eigen::Map<const Eigen::VectorXd>(s.rho.data(), graph.dim);
    const Eigen::VectorXd du = Eigen::Map<const Eigen::VectorXd>(s.du.data(), graph.dim);
    const Eigen::VectorXd rho_bar = sym.B * rho + sym.b;
    const Eigen::VectorXd du_bar = sym.A * du + sym.a;
    RhoSample t;
    t.rho.assign(rho_bar.data(), rho_bar.data() + graph.dim);
    t.u = sym.s * s.u + Bta.dot(rho) + sym.c;
    t.du.assign(du_bar.data(), du_bar.data() + graph.dim);
    t.ddu = sym.A * s.ddu * Binv;
    out.samples.push_back(std::move(t));
  }
  return out;
}

// --- perturbations ---------------------------------------------------------

AnalyticFamily perturb_quartic(const AnalyticFamily& fam, double eps) {
  AnalyticFamily out = fam;
  out.name = fam.name + "+quartic";
  if (fam.potential) {
    out.potential = [p = fam.potential, eps](const ComplexPoint& z) { return p(z) + eps * std::pow(std::norm(z[0]), 2); };
  }
  out.metric = [g = fam.metric, eps](const ComplexPoint& z) {
    HermitianMatrix m = g(z);
    m(0, 0) += 4.0 * eps * std::norm(z[0]);
    return m;
  };
  if (fam.toric) {
    out.toric = [t = fam.toric, eps](const std::vector<double>& r) {
      ToricJet j = t(r);
      j.u += eps * r[0] * r[0];
      j.du[0] += 2.0 * eps * r[0] * r[0];
      j.ddu(0, 0) += 4.0 * eps * r[0] * r[0];
      return j;
    };
  }
  return out;
}

AnalyticFamily scale_ricci_potential(const AnalyticFamily& fam, double factor) {
  AnalyticFamily out = fam;
  out.name = fam.name + "*f";
  out.ricci_potential = [f = fam.ricci_potential, factor](const ComplexPoint& z) { return factor * f(z); };
  return out;
}

AnalyticFamily scale_vector_field(const AnalyticFamily& fam, double factor) {
  AnalyticFamily out = fam;
  out.name = fam.name + "*Z";
  for (auto& h : out.z_eigen) h *= factor;
  out.soliton_h *= factor;
  return out;
}

RhoGraph perturb_graph(const RhoGraph& graph, double eps) {
  RhoGraph out = graph;
  for (auto& s : out.samples) {
    s.u += eps * s.rho[0] * s.rho[0];
    s.du[0] += 2.0 * eps * s.rho[0];
    s.ddu(0, 0) += 2.0 * eps;
  }
  return out;
}

}  // namespace gkrs
