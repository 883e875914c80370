#include "gkrs/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace gkrs {

// Monomials in graded order.  A monomial r^e is keyed by the mixed-radix number
// Σ e_i (D+1)^i; since every sum of two stored exponents that survives
// truncation has entries ≤ D, key(a + b) = key(a) + key(b).
struct TruncatedSeries::Layout {
  int nvars = 0;
  int degree = 0;
  std::vector<Exponents> exps;
  std::vector<int> deg;
  std::vector<std::size_t> key;
  std::vector<std::size_t> upto;  // upto[d] = number of monomials of degree ≤ d
  std::vector<int> index_of_key;  // -1 where the key is not a stored monomial
  std::size_t radix = 1;

  std::size_t key_of(const Exponents& e) const {
    std::size_t k = 0, p = 1;
    for (int i = 0; i < nvars; ++i) {
      k += static_cast<std::size_t>(e[i]) * p;
      p *= radix;
    }
    return k;
  }

  int index(const Exponents& e) const {
    int total = 0;
    for (int v : e) {
      if (v < 0) return -1;
      total += v;
    }
    if (total > degree) return -1;
    return index_of_key[key_of(e)];
  }
};

namespace {

constexpr int kMaxVars = 4;
constexpr int kMaxDegree = 16;

void build_degree(int nvars, int remaining, int var, TruncatedSeries::Exponents& cur,
                  std::vector<TruncatedSeries::Exponents>& out) {
  if (var == nvars - 1) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[var] = v;
    build_degree(nvars, remaining - v, var + 1, cur, out);
  }
}

std::shared_ptr<const TruncatedSeries::Layout> layout_for(int nvars, int degree) {
  if (nvars < 0 || nvars > kMaxVars) {
    throw Error(Errc::DimensionTooLarge, "series support at most " + std::to_string(kMaxVars) + " variables");
  }
  if (degree < 0 || degree > kMaxDegree) {
    throw Error(Errc::DimensionTooLarge, "series degree cap must lie in [0, " + std::to_string(kMaxDegree) + "]");
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TruncatedSeries::Layout>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{nvars, degree}];
  if (slot) return slot;

  auto L = std::make_shared<TruncatedSeries::Layout>();
  L->nvars = nvars;
  L->degree = degree;
  L->radix = static_cast<std::size_t>(degree) + 1;
  for (int d = 0; d <= degree; ++d) {
    if (nvars == 0) {
      if (d == 0) L->exps.emplace_back();
    } else {
      TruncatedSeries::Exponents cur(nvars, 0);
      build_degree(nvars, d, 0, cur, L->exps);
    }
    L->upto.push_back(L->exps.size());
  }
  std::size_t keys = 1;
  for (int i = 0; i < nvars; ++i) keys *= L->radix;
  L->index_of_key.assign(keys, -1);
  for (std::size_t i = 0; i < L->exps.size(); ++i) {
    int total = 0;
    for (int v : L->exps[i]) total += v;
    L->deg.push_back(total);
    L->key.push_back(L->key_of(L->exps[i]));
    L->index_of_key[L->key.back()] = static_cast<int>(i);
  }
  slot = std::move(L);
  return slot;
}

}  // namespace

TruncatedSeries::TruncatedSeries(int nvars, int degree)
    : layout_(layout_for(nvars, degree)), coeffs_(layout_->exps.size(), 0.0) {}

TruncatedSeries TruncatedSeries::constant(int nvars, int degree, double value) {
  TruncatedSeries s(nvars, degree);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::variable(int nvars, int degree, int var) {
  Exponents e(nvars, 0);
  if (var < 0 || var >= nvars) throw Error(Errc::ShapeMismatch, "variable index out of range");
  e[var] = 1;
  return monomial(nvars, degree, e);
}

TruncatedSeries TruncatedSeries::monomial(int nvars, int degree, const Exponents& e, double coeff) {
  TruncatedSeries s(nvars, degree);
  if (static_cast<int>(e.size()) != nvars) throw Error(Errc::ShapeMismatch, "exponent tuple has the wrong length");
  const int idx = s.layout_->index(e);
  if (idx >= 0) s.coeffs_[idx] = coeff;
  return s;
}

int TruncatedSeries::nvars() const { return layout_ ? layout_->nvars : 0; }
int TruncatedSeries::degree() const { return layout_ ? layout_->degree : -1; }
const TruncatedSeries::Exponents& TruncatedSeries::exponents(std::size_t idx) const { return layout_->exps[idx]; }
int TruncatedSeries::total_degree(std::size_t idx) const { return layout_->deg[idx]; }

double TruncatedSeries::coeff(const Exponents& e) const {
  if (static_cast<int>(e.size()) != nvars()) throw Error(Errc::ShapeMismatch, "exponent tuple has the wrong length");
  const int idx = layout_->index(e);
  return idx < 0 ? 0.0 : coeffs_[idx];
}

void TruncatedSeries::set_coeff(const Exponents& e, double value) {
  if (static_cast<int>(e.size()) != nvars()) throw Error(Errc::ShapeMismatch, "exponent tuple has the wrong length");
  const int idx = layout_->index(e);
  if (idx < 0) throw Error(Errc::ShapeMismatch, "exponent exceeds the degree cap");
  coeffs_[idx] = value;
}

void TruncatedSeries::require_same_shape(const TruncatedSeries& o) const {
  if (!layout_ || !o.layout_ || nvars() != o.nvars() || degree() != o.degree()) {
    throw Error(Errc::ShapeMismatch, "series differ in variable count or degree cap");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  require_same_shape(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TruncatedSeries TruncatedSeries::euler(int var) const {
  if (var < 0 || var >= nvars()) throw Error(Errc::ShapeMismatch, "variable index out of range");
  TruncatedSeries out = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] *= layout_->exps[i][var];
  return out;
}

TruncatedSeries TruncatedSeries::partial(int var) const {
  if (var < 0 || var >= nvars()) throw Error(Errc::ShapeMismatch, "variable index out of range");
  TruncatedSeries out(nvars(), degree());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const int e = layout_->exps[i][var];
    if (e == 0 || coeffs_[i] == 0.0) continue;
    Exponents lowered = layout_->exps[i];
    --lowered[var];
    out.coeffs_[layout_->index(lowered)] += e * coeffs_[i];
  }
  return out;
}

TruncatedSeries TruncatedSeries::times_variable(int var) const {
  if (var < 0 || var >= nvars()) throw Error(Errc::ShapeMismatch, "variable index out of range");
  TruncatedSeries out(nvars(), degree());
  for (std::size_t i = 0; i < layout_->upto[std::max(0, degree() - 1)] && degree() > 0; ++i) {
    Exponents raised = layout_->exps[i];
    ++raised[var];
    out.coeffs_[layout_->index(raised)] = coeffs_[i];
  }
  return out;
}

TruncatedSeries TruncatedSeries::with_degree(int degree) const {
  TruncatedSeries out(nvars(), degree);
  const std::size_t n = std::min(out.coeffs_.size(), coeffs_.size());
  // Both layouts list monomials in the same graded order.
  for (std::size_t i = 0; i < n; ++i) out.coeffs_[i] = coeffs_[i];
  return out;
}

TruncatedSeries TruncatedSeries::embed(int nvars, int var) const {
  if (nvars != this->nvars() + 1 || var < 0 || var >= nvars) {
    throw Error(Errc::ShapeMismatch, "embedding must add exactly one variable");
  }
  TruncatedSeries out(nvars, degree());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    Exponents e = layout_->exps[i];
    e.insert(e.begin() + var, 0);
    out.coeffs_[out.layout_->index(e)] = coeffs_[i];
  }
  return out;
}

TruncatedSeries TruncatedSeries::slice(int var, int m) const {
  if (var < 0 || var >= nvars() || m < 0 || m > degree()) throw Error(Errc::ShapeMismatch, "bad slice");
  TruncatedSeries out(nvars() - 1, degree() - m);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Exponents& e = layout_->exps[i];
    if (e[var] != m) continue;
    Exponents rest = e;
    rest.erase(rest.begin() + var);
    out.coeffs_[out.layout_->index(rest)] = coeffs_[i];
  }
  return out;
}

double TruncatedSeries::evaluate(const std::vector<double>& r) const {
  if (static_cast<int>(r.size()) != nvars()) throw Error(Errc::ShapeMismatch, "evaluation point has the wrong length");
  // Powers table per variable, then one pass over monomials.
  const int D = degree();
  std::vector<std::vector<double>> pw(r.size(), std::vector<double>(D + 1, 1.0));
  for (std::size_t v = 0; v < r.size(); ++v) {
    for (int k = 1; k <= D; ++k) pw[v][k] = pw[v][k - 1] * r[v];
  }
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    double term = coeffs_[i];
    for (std::size_t v = 0; v < r.size(); ++v) term *= pw[v][layout_->exps[i][v]];
    s += term;
  }
  return s;
}

double TruncatedSeries::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool TruncatedSeries::bit_equal(const TruncatedSeries& o) const {
  return nvars() == o.nvars() && degree() == o.degree() &&
         std::memcmp(coeffs_.data(), o.coeffs_.data(), coeffs_.size() * sizeof(double)) == 0;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.require_same_shape(b);
  const auto& L = *a.layout_;
  TruncatedSeries out(a.nvars(), a.degree());
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    const std::size_t lim = L.upto[L.degree - L.deg[i]];
    const std::size_t ki = L.key[i];
    for (std::size_t j = 0; j < lim; ++j) {
      const double bj = b.coeffs_[j];
      if (bj == 0.0) continue;
      out.coeffs_[L.index_of_key[ki + L.key[j]]] += ai * bj;
    }
  }
  return out;
}

TruncatedSeries series_exp(const TruncatedSeries& a) {
  const auto& L = *a.layout_;
  // E a, with E = Σ r^i ∂_i the total-degree operator.
  std::vector<double> ea(a.coeffs_.size());
  for (std::size_t i = 0; i < ea.size(); ++i) ea[i] = L.deg[i] * a.coeffs_[i];
  TruncatedSeries y(a.nvars(), a.degree());
  y.coeffs_[0] = 1.0;
  for (int d = 1; d <= L.degree; ++d) {
    // [(E a)·y]_d uses y only through degree d − 1.
    for (std::size_t i = 1; i < L.upto[d]; ++i) {
      if (ea[i] == 0.0) continue;
      const int rest = d - L.deg[i];
      const std::size_t lo = rest == 0 ? 0 : L.upto[rest - 1];
      for (std::size_t j = lo; j < L.upto[rest]; ++j) {
        if (y.coeffs_[j] == 0.0) continue;
        y.coeffs_[L.index_of_key[L.key[i] + L.key[j]]] += ea[i] * y.coeffs_[j];
      }
    }
    for (std::size_t k = L.upto[d - 1]; k < L.upto[d]; ++k) y.coeffs_[k] /= d;
  }
  return y * std::exp(a.coeffs_[0]);
}

TruncatedSeries series_reciprocal(const TruncatedSeries& a) {
  const auto& L = *a.layout_;
  const double a0 = a.coeffs_[0];
  if (a0 == 0.0) throw Error(Errc::DegenerateInitialData, "reciprocal of a series with zero constant term");
  TruncatedSeries y(a.nvars(), a.degree());
  y.coeffs_[0] = 1.0 / a0;
  for (int d = 1; d <= L.degree; ++d) {
    for (std::size_t i = 1; i < L.upto[d]; ++i) {
      if (a.coeffs_[i] == 0.0) continue;
      const int rest = d - L.deg[i];
      const std::size_t lo = rest == 0 ? 0 : L.upto[rest - 1];
      for (std::size_t j = lo; j < L.upto[rest]; ++j) {
        y.coeffs_[L.index_of_key[L.key[i] + L.key[j]]] -= a.coeffs_[i] * y.coeffs_[j];
      }
    }
    for (std::size_t k = L.upto[d - 1]; k < L.upto[d]; ++k) y.coeffs_[k] /= a0;
  }
  return y;
}

TruncatedSeries series_det(const std::vector<std::vector<TruncatedSeries>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(Errc::ShapeMismatch, "determinant of an empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw Error(Errc::ShapeMismatch, "determinant of a non-square matrix");
  }
  if (n == 1) return m[0][0];
  TruncatedSeries det(m[0][0].nvars(), m[0][0].degree());
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<TruncatedSeries>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<TruncatedSeries> row;
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    TruncatedSeries term = series_mul(m[0][col], series_det(minor));
    if (col % 2 == 0) {
      det += term;
    } else {
      det -= term;
    }
  }
  return det;
}

}  // namespace gkrs
