#include "gkrs/holodata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace gkrs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  if (s.empty()) throw Error(Errc::ParseError, "empty integer");
  std::size_t pos = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) throw Error(Errc::ParseError, "bad integer '" + std::string(s) + "'");
  std::int64_t v = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) {
      throw Error(Errc::ParseError, "bad integer '" + std::string(s) + "'");
    }
    if (v > (INT64_MAX - 9) / 10) throw Error(Errc::ParseError, "integer overflow in '" + std::string(s) + "'");
    v = v * 10 + (s[pos] - '0');
  }
  return neg ? -v : v;
}

std::int64_t pow10(int e) {
  if (e > 18) throw Error(Errc::ParseError, "too many decimal digits");
  std::int64_t p = 1;
  while (e-- > 0) p *= 10;
  return p;
}

// Elementary column operations on a single row w, recorded in U, until w has
// one non-zero entry.  The remaining columns of U span the integer kernel.
std::vector<IntVector> integer_kernel(IntVector w) {
  const std::size_t n = w.size();
  std::vector<IntVector> U(n, IntVector(n, 0));  // U[col][row]
  for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
  for (;;) {
    std::size_t p = n;
    for (std::size_t q = 0; q < n; ++q) {
      if (w[q] != 0 && (p == n || std::abs(w[q]) < std::abs(w[p]))) p = q;
    }
    if (p == n) break;  // w = 0
    bool reduced = false;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p || w[q] == 0) continue;
      const std::int64_t m = w[q] / w[p];
      w[q] -= m * w[p];
      for (std::size_t r = 0; r < n; ++r) U[q][r] -= m * U[p][r];
      reduced = true;
    }
    if (!reduced) {
      std::vector<IntVector> kernel;
      for (std::size_t q = 0; q < n; ++q) {
        if (q != p) kernel.push_back(U[q]);
      }
      return kernel;
    }
  }
  return U;
}

void enumerate(const IntVector& w, std::size_t j, std::int64_t remaining, IntVector& k,
               int target, std::vector<ResonancePair>& out) {
  if (j == w.size()) {
    if (remaining == 0) out.push_back({target, k});
    return;
  }
  for (std::int64_t kj = remaining / w[j]; kj >= 0; --kj) {
    k[j] = kj;
    enumerate(w, j + 1, remaining - kj * w[j], k, target, out);
  }
  k[j] = 0;
}

}  // namespace

Rational parse_rational(std::string_view token) {
  token = trim(token);
  if (token.empty()) throw Error(Errc::ParseError, "empty eigenvalue");
  if (const auto slash = token.find('/'); slash != std::string_view::npos) {
    const std::int64_t num = parse_int(trim(token.substr(0, slash)));
    const std::int64_t den = parse_int(trim(token.substr(slash + 1)));
    if (den == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(token) + "'");
    return Rational(num, den);
  }
  // Decimal with optional exponent: [+-]digits[.digits][e[+-]digits]
  std::string_view mant = token;
  int exp10 = 0;
  if (const auto e = token.find_first_of("eE"); e != std::string_view::npos) {
    mant = token.substr(0, e);
    exp10 = static_cast<int>(parse_int(token.substr(e + 1)));
  }
  std::string digits;
  int frac = 0;
  bool seen_dot = false, neg = false;
  for (std::size_t i = 0; i < mant.size(); ++i) {
    const char ch = mant[i];
    if (i == 0 && (ch == '+' || ch == '-')) {
      neg = ch == '-';
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_dot) ++frac;
    } else {
      throw Error(Errc::ParseError, "not a rational number: '" + std::string(token) + "'");
    }
  }
  if (digits.empty()) throw Error(Errc::ParseError, "not a rational number: '" + std::string(token) + "'");
  std::int64_t num = parse_int(digits);
  if (neg) num = -num;
  const int shift = exp10 - frac;
  if (shift >= 0) {
    const std::int64_t p = pow10(shift);
    if (num != 0 && std::abs(num) > INT64_MAX / p) throw Error(Errc::ParseError, "eigenvalue too large");
    return Rational(num * p, 1);
  }
  return Rational(num, pow10(-shift));
}

EigenData EigenData::from_rationals(std::vector<Rational> h) {
  if (h.empty()) throw Error(Errc::InvalidParam, "h must have at least one entry");
  EigenData d;
  for (const auto& q : h) d.values_.push_back(boost::rational_cast<double>(q));
  d.exact_ = std::move(h);
  return d;
}

EigenData EigenData::from_reals(std::vector<double> h) {
  if (h.empty()) throw Error(Errc::InvalidParam, "h must have at least one entry");
  for (double v : h) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "h entries must be finite");
  }
  EigenData d;
  d.values_ = std::move(h);
  return d;
}

EigenData EigenData::parse(std::string_view text) {
  std::vector<Rational> h;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    h.push_back(parse_rational(text.substr(start, end - start)));
    start = end + 1;
  }
  return from_rationals(std::move(h));
}

const std::vector<Rational>& EigenData::rationals() const {
  if (!exact_) throw Error(Errc::IrrationalInput, "h was not given as exact rationals");
  return *exact_;
}

Rational dot(const IntVector& k, const std::vector<Rational>& h) {
  if (k.size() != h.size()) throw Error(Errc::ShapeMismatch, "dot product of vectors with different lengths");
  Rational s(0);
  for (std::size_t i = 0; i < k.size(); ++i) s += Rational(k[i]) * h[i];
  return s;
}

ComplexPoint flow_Zh(const EigenData& h, cplx t, const ComplexPoint& z) {
  if (z.size() != h.size()) throw Error(Errc::ShapeMismatch, "point and h have different dimensions");
  ComplexPoint out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::exp(h.values()[i] * t) * z[i];
  return out;
}

std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows) {
  if (rows.empty()) return rows;
  const std::size_t ncols = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
    // Euclid on column `col` among rows pivot_row.. until one non-zero remains.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][col] != 0 && (best == rows.size() || std::abs(rows[r][col]) < std::abs(rows[best][col]))) {
          best = r;
        }
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool changed = false;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        const std::int64_t m = rows[r][col] / rows[pivot_row][col];
        for (std::size_t c = 0; c < ncols; ++c) rows[r][c] -= m * rows[pivot_row][c];
        changed = true;
      }
      if (!changed) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0) {
      for (auto& v : rows[pivot_row]) v = -v;
    }
    const std::int64_t p = rows[pivot_row][col];
    for (std::size_t r = 0; r < pivot_row; ++r) {
      // Floor division keeps entries above the pivot in [0, p).
      std::int64_t m = rows[r][col] / p;
      if (rows[r][col] - m * p < 0) --m;
      for (std::size_t c = 0; c < ncols; ++c) rows[r][c] -= m * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

LatticeResult lattice_basis(const EigenData& h) {
  const auto& q = h.rationals();
  std::int64_t l = 1;
  for (const auto& v : q) l = std::lcm(l, v.denominator());
  IntVector w;
  for (const auto& v : q) w.push_back(v.numerator() * (l / v.denominator()));
  LatticeResult out;
  out.basis = hermite_normal_form(integer_kernel(w));
  out.rank = static_cast<int>(out.basis.size());
  out.q_rank = static_cast<int>(q.size()) - out.rank;
  return out;
}

ResonanceResult resonances(const EigenData& h) {
  const auto& q = h.rationals();
  for (const auto& v : q) {
    if (v <= Rational(0)) throw Error(Errc::NonPositiveEigenvalue, "resonance counting needs every h_i > 0");
  }
  std::int64_t l = 1;
  for (const auto& v : q) l = std::lcm(l, v.denominator());
  IntVector w;
  for (const auto& v : q) w.push_back(v.numerator() * (l / v.denominator()));
  ResonanceResult out;
  IntVector k(w.size(), 0);
  for (std::size_t i = 0; i < w.size(); ++i) enumerate(w, 0, w[i], k, static_cast<int>(i), out.pairs);
  out.d_h = static_cast<int>(out.pairs.size());
  return out;
}

}  // namespace gkrs
