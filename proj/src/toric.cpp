#include "gkrs/toric.hpp"

#include <cmath>

namespace gkrs {

namespace {

void require_dims(int n, const std::vector<double>& h) {
  if (n > 4) throw Error(Errc::DimensionTooLarge, "toric equations support n <= 4");
  if (n < 1) throw Error(Errc::InvalidParam, "toric equations need n >= 1");
  if (static_cast<int>(h.size()) != n) throw Error(Errc::ShapeMismatch, "h length differs from the series dimension");
}

// det(∂_i (r^j ∂_j w)) · exp(½ Σ_j h_j r^j ∂_j w) over the variables of w.  This
// is the reduced left side with the factor r¹⋯rⁿ divided out.
TruncatedSeries reduced_lhs(const TruncatedSeries& w, const std::vector<double>& h) {
  const int n = w.nvars();
  if (n == 0) return TruncatedSeries::constant(0, w.degree(), 1.0);
  std::vector<TruncatedSeries> ew;
  TruncatedSeries drift(n, w.degree());
  for (int j = 0; j < n; ++j) {
    ew.push_back(w.euler(j));
    drift += 0.5 * h[j] * ew.back();
  }
  std::vector<std::vector<TruncatedSeries>> k(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k[i].push_back(ew[j].partial(i));
  }
  return series_mul(series_det(k), series_exp(drift));
}

}  // namespace

TruncatedSeries ma_residual(const TruncatedSeries& u, const std::vector<double>& h) {
  const int n = u.nvars();
  require_dims(n, h);
  if (u.degree() < n) throw Error(Errc::InvalidParam, "degree cap must be at least n");
  std::vector<TruncatedSeries> eu;
  TruncatedSeries drift(n, u.degree());
  for (int j = 0; j < n; ++j) {
    eu.push_back(u.euler(j));
    drift += 0.5 * h[j] * eu.back();
  }
  std::vector<std::vector<TruncatedSeries>> m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i].push_back(eu[j].euler(i));
  }
  TruncatedSeries res = series_mul(series_det(m), series_exp(drift));
  res -= TruncatedSeries::monomial(n, u.degree(), std::vector<int>(n, 1));
  return res;
}

TruncatedSeries solve_singular_ivp(const ToricInitialData& init, int degree, SolveDiagnostics* diag) {
  const int n = static_cast<int>(init.h.size());
  require_dims(n, init.h);
  if (degree < 2) throw Error(Errc::InvalidParam, "degree must be at least 2");
  for (double hj : init.h) {
    if (!std::isfinite(hj)) throw Error(Errc::NonFinite, "h has a non-finite entry");
  }

  TruncatedSeries v;
  if (n == 1 && init.v.degree() < 0) {
    v = TruncatedSeries(0, degree);
  } else {
    if (init.v.nvars() != n - 1) throw Error(Errc::ShapeMismatch, "initial data must have n - 1 variables");
    v = init.v.with_degree(degree);
  }
  if (v.constant_term() != 0.0) throw Error(Errc::InvalidParam, "initial data must satisfy v(0) = 0");
  for (int i = 0; i < n - 1; ++i) {
    std::vector<int> e(n - 1, 0);
    e[i] = 1;
    if (!(v.coeff(e) > 0.0)) {
      throw Error(Errc::DegenerateInitialData, "initial data is not strictly pseudo-convex at the origin");
    }
  }

  // z_m is fixed by m²·D₀·E₀·z_m = δ_{m1} − [t^{m−1}](lhs with z_m = 0), where
  // D₀·E₀ is the reduced left side of v alone.
  const TruncatedSeries q = reduced_lhs(v, init.h);
  if (q.constant_term() == 0.0) throw Error(Errc::DegenerateInitialData, "leading determinant vanishes at the origin");
  const TruncatedSeries qinv = series_reciprocal(q);

  TruncatedSeries u = n == 1 ? TruncatedSeries(1, degree) : v.embed(n, n - 1);
  const int t = n - 1;
  for (int m = 1; m <= degree; ++m) {
    TruncatedSeries rhs = reduced_lhs(u, init.h).slice(t, m - 1).with_degree(degree - m) * -1.0;
    rhs[0] += (m == 1) ? 1.0 : 0.0;
    const TruncatedSeries zm = series_mul(rhs, qinv.with_degree(degree - m)) * (1.0 / (m * m));
    for (std::size_t k = 0; k < zm.size(); ++k) {
      if (zm[k] == 0.0) continue;
      if (!std::isfinite(zm[k])) throw Error(Errc::NonConvergent, "non-finite coefficient at order " + std::to_string(m));
      std::vector<int> e = zm.exponents(k);
      e.insert(e.end(), m);
      u.set_coeff(e, zm[k]);
    }
  }
  if (diag) {
    diag->max_coeff = u.max_abs();
    diag->growth_warning = diag->max_coeff > 1e12;
  }
  return u;
}

// --- evaluation ------------------------------------------------------------

ToricModel::ToricModel(TruncatedSeries u, std::vector<double> h, double trust_radius)
    : u_(std::move(u)), h_(std::move(h)), trust_(trust_radius) {
  require_dims(u_.nvars(), h_);
  if (!(trust_ > 0.0)) throw Error(Errc::InvalidParam, "trust radius must be positive");
  const int n = u_.nvars();
  for (int i = 0; i < n; ++i) {
    du_.push_back(u_.partial(i));
    eu_.push_back(u_.euler(i));
  }
  ddu_.resize(n);
  eeu_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ddu_[i].push_back(du_[j].partial(i));
      eeu_[i].push_back(eu_[j].euler(i));
    }
  }
}

bool ToricModel::in_trust_region(const ComplexPoint& z) const {
  if (static_cast<int>(z.size()) != dim()) return false;
  for (const auto& c : z) {
    if (!(std::norm(c) <= trust_)) return false;
  }
  return true;
}

std::vector<double> ToricModel::radii(const ComplexPoint& z) const {
  if (static_cast<int>(z.size()) != dim()) throw Error(Errc::ShapeMismatch, "point dimension differs from the series");
  if (!in_trust_region(z)) throw Error(Errc::OutOfTrustRegion, "|z^i|^2 exceeds the series trust radius");
  std::vector<double> r;
  for (const auto& c : z) r.push_back(std::norm(c));
  return r;
}

ToricEval ToricModel::eval(const ComplexPoint& z) const {
  const auto r = radii(z);
  const int n = dim();
  ToricEval out;
  out.phi = u_.evaluate(r);
  out.g = HermitianMatrix::Zero(n, n);
  std::vector<double> ui(n);
  for (int i = 0; i < n; ++i) ui[i] = du_[i].evaluate(r);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.g(i, j) = std::conj(z[i]) * z[j] * ddu_[i][j].evaluate(r);
    }
    out.g(i, i) += ui[i];
    out.f += 0.5 * h_[i] * r[i] * ui[i];
  }
  out.g = hermitian_part(out.g);
  return out;
}

ToricJet ToricModel::jet(const std::vector<double>& r) const {
  const int n = dim();
  if (static_cast<int>(r.size()) != n) throw Error(Errc::ShapeMismatch, "point dimension differs from the series");
  for (double ri : r) {
    if (!(ri >= 0.0 && ri <= trust_)) throw Error(Errc::OutOfTrustRegion, "r^i outside the series trust radius");
  }
  ToricJet j;
  j.u = u_.evaluate(r);
  j.ddu.resize(n, n);
  for (int a = 0; a < n; ++a) {
    j.du.push_back(eu_[a].evaluate(r));
    for (int b = 0; b < n; ++b) j.ddu(a, b) = eeu_[a][b].evaluate(r);
  }
  j.ddu = 0.5 * (j.ddu + j.ddu.transpose()).eval();
  return j;
}

AnalyticFamily ToricModel::as_family() const {
  AnalyticFamily fam;
  fam.name = "toric";
  fam.dim = dim();
  fam.params = {{"h", h_}, {"degree", {static_cast<double>(u_.degree())}}, {"trust", {trust_}}};
  // The lambdas share one immutable copy of the model.
  auto self = std::make_shared<const ToricModel>(*this);
  fam.potential = [self](const ComplexPoint& z) { return self->eval(z).phi; };
  fam.metric = [self](const ComplexPoint& z) { return self->eval(z).g; };
  fam.ricci_potential = [self](const ComplexPoint& z) { return self->eval(z).f; };
  fam.toric = [self](const std::vector<double>& r) { return self->jet(r); };
  fam.in_domain = [self](const ComplexPoint& z) { return self->in_trust_region(z); };
  fam.z_eigen = h_;
  fam.soliton_h = 0.0;
  for (double hi : h_) fam.soliton_h += hi;
  fam.gauge_constant = 0.0;
  return fam;
}

ToricEval toric_eval(const TruncatedSeries& u, const std::vector<double>& h, const ComplexPoint& z,
                     double trust_radius) {
  return ToricModel(u, h, trust_radius).eval(z);
}

// --- ρ-coordinates ---------------------------------------------------------

RhoGraph rho_graph(const ToricField& field, int dim, const std::vector<std::vector<double>>& rhos) {
  if (!field) throw Error(Errc::InvalidParam, "family has no toric description");
  RhoGraph g;
  g.dim = dim;
  for (const auto& rho : rhos) {
    if (static_cast<int>(rho.size()) != dim) throw Error(Errc::ShapeMismatch, "rho sample has the wrong length");
    std::vector<double> r;
    for (double x : rho) r.push_back(std::exp(x));
    ToricJet jet = field(r);
    g.samples.push_back({rho, jet.u, jet.du, jet.ddu});
  }
  return g;
}

std::vector<std::vector<double>> rho_grid(int dim, double lo, double hi, int count) {
  if (dim < 1 || count < 1) throw Error(Errc::InvalidParam, "rho grid needs dim >= 1 and count >= 1");
  std::vector<double> axis;
  for (int k = 0; k < count; ++k) axis.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  std::vector<std::vector<double>> pts{{}};
  for (int d = 0; d < dim; ++d) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts) {
      for (double x : axis) {
        auto q = p;
        q.push_back(x);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace gkrs
