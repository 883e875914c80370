#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include <Eigen/Dense>

#include "gkrs/series.hpp"

using namespace gkrs;

namespace {

using Sparse = std::map<std::vector<int>, double>;

Sparse to_sparse(const TruncatedSeries& s) {
  Sparse out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 0.0) out[s.exponents(i)] = s[i];
  }
  return out;
}

int total(const std::vector<int>& e) {
  int t = 0;
  for (int x : e) t += x;
  return t;
}

// Naive truncated product on a sparse map.
Sparse naive_mul(const Sparse& a, const Sparse& b, int degree) {
  Sparse out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (total(e) <= degree) out[e] += ca * cb;
    }
  }
  return out;
}

TruncatedSeries random_series(int n, int D, std::mt19937& rng, bool zero_constant = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s(n, D);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = u(rng);
  if (zero_constant) s[0] = 0.0;
  return s;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double max_diff(const TruncatedSeries& a, const TruncatedSeries& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("layout size and exponent order") {
  for (int n = 0; n <= 4; ++n) {
    for (int D : {0, 1, 5, 16}) {
      const TruncatedSeries s(n, D);
      CHECK(s.size() == static_cast<std::size_t>(std::llround(binom(D + n, n))));
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.total_degree(i) >= s.total_degree(i - 1));
    }
  }
  const TruncatedSeries s(2, 3);
  CHECK(s.exponents(0) == std::vector<int>{0, 0});
  CHECK(s.total_degree(s.size() - 1) == 3);
}

TEST_CASE("size limits") {
  auto code = [](int n, int D) {
    try {
      TruncatedSeries(n, D);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidParam;
  };
  CHECK(code(5, 2) == Errc::DimensionTooLarge);
  CHECK(code(2, 17) == Errc::DimensionTooLarge);
  CHECK_NOTHROW(TruncatedSeries(4, 16));
}

TEST_CASE("coefficient access") {
  TruncatedSeries s(2, 3);
  s.set_coeff({1, 2}, 2.5);
  CHECK(s.coeff({1, 2}) == 2.5);
  CHECK(s.coeff({2, 2}) == 0.0);
  CHECK(s.coeff({0, 0}) == 0.0);
  CHECK_THROWS_AS(s.set_coeff({2, 2}, 1.0), Error);
  const auto m = TruncatedSeries::monomial(3, 4, {1, 0, 2}, -3.0);
  CHECK(m.coeff({1, 0, 2}) == -3.0);
  CHECK(m.max_abs() == 3.0);
  CHECK(TruncatedSeries::variable(2, 3, 1).coeff({0, 1}) == 1.0);
  CHECK(TruncatedSeries::constant(2, 3, 4.0).constant_term() == 4.0);
}

TEST_CASE("multiplication examples") {
  // (1 + r)(1 − r) = 1 − r², D = 3.
  auto one = TruncatedSeries::constant(1, 3, 1.0);
  auto r = TruncatedSeries::variable(1, 3, 0);
  const auto p = series_mul(one + r, one - r);
  CHECK(p.coeff({0}) == 1.0);
  CHECK(p.coeff({1}) == 0.0);
  CHECK(p.coeff({2}) == -1.0);
  CHECK(p.coeff({3}) == 0.0);
  // (1 + r¹ + r²)² at D = 2.
  auto one2 = TruncatedSeries::constant(2, 2, 1.0);
  auto s = one2 + TruncatedSeries::variable(2, 2, 0) + TruncatedSeries::variable(2, 2, 1);
  const auto q = series_mul(s, s);
  CHECK(q.coeff({0, 0}) == 1.0);
  CHECK(q.coeff({1, 0}) == 2.0);
  CHECK(q.coeff({1, 1}) == 2.0);
  CHECK(q.coeff({2, 0}) == 1.0);
  CHECK(q.coeff({0, 2}) == 1.0);
}

TEST_CASE("multiplication against naive product") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 4; ++n) {
    for (int D : {0, 2, 5}) {
      const auto a = random_series(n, D, rng), b = random_series(n, D, rng);
      const auto got = to_sparse(series_mul(a, b));
      const auto want = naive_mul(to_sparse(a), to_sparse(b), D);
      double err = 0.0;
      for (const auto& [e, c] : want) {
        const auto it = got.find(e);
        err = std::max(err, std::abs(c - (it == got.end() ? 0.0 : it->second)));
      }
      CHECK(err < 1e-13);
      CHECK(got.size() <= want.size());
    }
  }
}

TEST_CASE("ring properties") {
  std::mt19937 rng(5);
  const auto a = random_series(3, 5, rng), b = random_series(3, 5, rng), c = random_series(3, 5, rng);
  CHECK(max_diff(series_mul(a, b), series_mul(b, a)) < 1e-14);
  CHECK(max_diff(series_mul(series_mul(a, b), c), series_mul(a, series_mul(b, c))) < 1e-12);
  CHECK(max_diff(series_mul(a, b + c), series_mul(a, b) + series_mul(a, c)) < 1e-13);
  CHECK(series_mul(a, TruncatedSeries::constant(3, 5, 1.0)).bit_equal(a));
}

TEST_CASE("shape mismatch") {
  const TruncatedSeries a(2, 3), b(2, 4), c(3, 3);
  for (const auto* other : {&b, &c}) {
    try {
      series_mul(a, *other);
      FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ShapeMismatch);
    }
    CHECK_THROWS_AS(a + *other, Error);
  }
}

TEST_CASE("exp examples") {
  auto r = TruncatedSeries::variable(1, 8, 0);
  const auto e = series_exp(r);
  double fact = 1.0;
  for (int k = 0; k <= 8; ++k) {
    if (k > 0) fact *= k;
    CHECK(e.coeff({k}) == doctest::Approx(1.0 / fact).epsilon(1e-15));
  }
  // exp(2 + r) = e² exp(r).
  const auto e2 = series_exp(r + TruncatedSeries::constant(1, 8, 2.0));
  for (int k = 0; k <= 8; ++k) CHECK(e2.coeff({k}) == doctest::Approx(std::exp(2.0) * e.coeff({k})).epsilon(1e-14));
  // exp(r¹ + r²) = exp(r¹) exp(r²).
  const auto x = TruncatedSeries::variable(2, 6, 0), y = TruncatedSeries::variable(2, 6, 1);
  CHECK(max_diff(series_exp(x + y), series_mul(series_exp(x), series_exp(y))) < 1e-15);
}

TEST_CASE("exp and reciprocal properties") {
  std::mt19937 rng(23);
  for (int n = 1; n <= 3; ++n) {
    const auto a = random_series(n, 6, rng), b = random_series(n, 6, rng);
    // exp(a + b) = exp(a) exp(b), exp(−a) exp(a) = 1.
    CHECK(max_diff(series_exp(a + b), series_mul(series_exp(a), series_exp(b))) < 1e-11);
    const auto one = series_mul(series_exp(a * -1.0), series_exp(a));
    CHECK(max_diff(one, TruncatedSeries::constant(n, 6, 1.0)) < 1e-12);
    // d/dr^i exp(a) = exp(a) ∂_i a, compared below the cap.
    const auto ea = series_exp(a);
    const auto lhs = ea.partial(0).with_degree(5);
    const auto rhs = series_mul(ea, a.partial(0)).with_degree(5);
    CHECK(max_diff(lhs, rhs) < 1e-11);
    // a · (1/a) = 1 when a₀ ≠ 0.
    auto c = a;
    c[0] = 2.0;
    CHECK(max_diff(series_mul(c, series_reciprocal(c)), TruncatedSeries::constant(n, 6, 1.0)) < 1e-12);
  }
  try {
    series_reciprocal(TruncatedSeries::variable(1, 3, 0));
    FAIL("expected DegenerateInitialData");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateInitialData);
  }
}

TEST_CASE("reciprocal examples") {
  // 1/(1 − r) = Σ rᵏ.
  auto s = TruncatedSeries::constant(1, 7, 1.0) - TruncatedSeries::variable(1, 7, 0);
  const auto inv = series_reciprocal(s);
  for (int k = 0; k <= 7; ++k) CHECK(inv.coeff({k}) == 1.0);
}

TEST_CASE("operators on exponents") {
  TruncatedSeries s(2, 4);
  s.set_coeff({1, 2}, 3.0);
  s.set_coeff({0, 4}, 1.0);
  const auto e = s.euler(1);
  CHECK(e.coeff({1, 2}) == 6.0);
  CHECK(e.coeff({0, 4}) == 4.0);
  const auto d = s.partial(1);
  CHECK(d.coeff({1, 1}) == 6.0);
  CHECK(d.coeff({0, 3}) == 4.0);
  const auto t = s.times_variable(0);
  CHECK(t.coeff({2, 2}) == 3.0);
  CHECK(t.coeff({1, 4}) == 0.0);  // truncated
  CHECK(s.with_degree(3).coeff({1, 2}) == 3.0);
  CHECK(s.with_degree(3).coeff({0, 4}) == 0.0);
  CHECK(s.with_degree(6).coeff({0, 4}) == 1.0);
  const auto emb = s.embed(3, 1);
  CHECK(emb.coeff({1, 0, 2}) == 3.0);
  CHECK(emb.coeff({0, 0, 4}) == 1.0);
  const auto sl = s.slice(1, 2);
  CHECK(sl.nvars() == 1);
  CHECK(sl.degree() == 2);
  CHECK(sl.coeff({1}) == 3.0);
  CHECK(s.evaluate({2.0, 0.5}) == doctest::Approx(3.0 * 2.0 * 0.25 + 0.0625).epsilon(1e-15));
}

TEST_CASE("determinant of series matrices") {
  std::mt19937 rng(3);
  const auto a = random_series(2, 4, rng), b = random_series(2, 4, rng);
  const auto c = random_series(2, 4, rng), d = random_series(2, 4, rng);
  const auto det = series_det({{a, b}, {c, d}});
  CHECK(max_diff(det, series_mul(a, d) - series_mul(b, c)) < 1e-14);
  // Evaluation commutes with det at a small point (truncation error aside).
  const auto one = TruncatedSeries::constant(1, 10, 1.0);
  const auto r = TruncatedSeries::variable(1, 10, 0);
  const auto m = series_det({{one + r, r, r * 2.0}, {r, one, r}, {r * 3.0, r, one - r}});
  const double x = 0.1;
  Eigen::Matrix3d M;
  M << 1 + x, x, 2 * x, x, 1, x, 3 * x, x, 1 - x;
  CHECK(m.evaluate({x}) == doctest::Approx(M.determinant()).epsilon(1e-14));
}

TEST_CASE("log-type identity for the one-variable dilog potential") {
  // u(r) = −(2/h) Li₂(−h r / 2) has r u′ = (2/h) log(1 + h r / 2).
  for (double h : {1.0, 2.0, 0.5}) {
    const int D = 6;
    TruncatedSeries u(1, D);
    for (int k = 1; k <= D; ++k) u.set_coeff({k}, -(2.0 / h) * std::pow(-h / 2.0, k) / (k * k));
    const auto ru = u.euler(0);
    for (int k = 1; k <= D; ++k) {
      const double want = (2.0 / h) * std::pow(-1.0, k + 1) * std::pow(h / 2.0, k) / k;
      CHECK(ru.coeff({k}) == doctest::Approx(want).epsilon(1e-15));
    }
  }
}
