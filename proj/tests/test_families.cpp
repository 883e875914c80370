#include <doctest.h>

#include <cmath>
#include <random>

#include "gkrs/ckgeom.hpp"
#include "gkrs/dilog.hpp"
#include "gkrs/families.hpp"

using namespace gkrs;

namespace {

// F(b) = ∫₀ᵇ βⁿ⁻¹ e^β dβ by composite Simpson with 4000 panels.
double F_quadrature(int n, double b) {
  const int m = 4000;
  const double h = b / m;
  auto g = [n](double x) { return std::pow(x, n - 1) * std::exp(x); };
  double s = g(0.0) + g(b);
  for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * g(k * h);
  return s * h / 3.0;
}

// Taylor coefficients of a(y), y = (h/2) r, from a^{n−1} e^{w} w′ = 1 with
// w = y·a (the Cao ODE in the variable y).  Returns a_0 … a_K.
std::vector<double> cao_a_series(int n, int K_out) {
  // One extra order so that w′ is complete at the last solved order.
  const int K = K_out + 1;
  // Work with w(y) = Σ w_k y^k, w_1 = 1, and a = w/y.  The ODE is
  // (w/y)^{n−1} e^{w} w′ = 1.  Solve by undetermined coefficients using
  // truncated power series arithmetic on a.
  std::vector<double> a(K + 1, 0.0);
  a[0] = 1.0;
  auto mul = [K](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(K + 1, 0.0);
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  auto series_exp = [K, &mul](const std::vector<double>& p) {
    // p has zero constant term.
    std::vector<double> r(K + 1, 0.0), term(K + 1, 0.0);
    r[0] = term[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
      term = mul(term, p);
      for (int i = 0; i <= K; ++i) r[i] += term[i] / std::tgamma(k + 1.0);
    }
    return r;
  };
  for (int m = 1; m <= K_out; ++m) {
    // Residual of the ODE at order y^m with a_m = 0, then solve the linear
    // equation (n + m) a_m + rest = 0 for a_m.
    auto residual = [&](const std::vector<double>& aa) {
      std::vector<double> w(K + 1, 0.0), dw(K + 1, 0.0);
      for (int k = 0; k < K; ++k) w[k + 1] = aa[k];
      for (int k = 0; k < K; ++k) dw[k] = (k + 1) * w[k + 1];
      std::vector<double> pw(K + 1, 0.0);
      pw[0] = 1.0;
      for (int k = 0; k < n - 1; ++k) pw = mul(pw, aa);
      return mul(mul(pw, series_exp(w)), dw)[m];
    };
    std::vector<double> t0 = a, t1 = a;
    t1[m] = 1.0;
    const double r0 = residual(t0), r1 = residual(t1);
    a[m] = -r0 / (r1 - r0);
  }
  a.resize(K_out + 1);
  return a;
}

double richardson_limit(const std::function<double(double)>& q, double r0, int levels, int p0 = 1) {
  std::vector<double> prev{q(r0)};
  for (int k = 1; k <= levels; ++k) {
    std::vector<double> cur{q(r0 / std::ldexp(1.0, k))};
    for (int j = 1; j <= k; ++j) {
      const double f = std::ldexp(1.0, p0 + j - 1) - 1.0;
      cur.push_back(cur[j - 1] + (cur[j - 1] - prev[j - 1]) / f);
    }
    prev = cur;
  }
  return prev.back();
}

}  // namespace

TEST_CASE("dilogarithm special values") {
  const double pi2 = M_PI * M_PI;
  CHECK(dilog(0.0) == 0.0);
  CHECK(dilog(1.0) == doctest::Approx(pi2 / 6.0).epsilon(1e-15));
  CHECK(dilog(-1.0) == doctest::Approx(-pi2 / 12.0).epsilon(1e-15));
  CHECK(dilog(0.5) == doctest::Approx(pi2 / 12.0 - 0.5 * std::log(2.0) * std::log(2.0)).epsilon(1e-15));
  // Li₂(x) = Σ x^k/k² directly for small |x|.
  for (double x : {-0.3, -0.05, 0.1, 0.4}) {
    double s = 0.0;
    for (int k = 1; k < 200; ++k) s += std::pow(x, k) / (k * k);
    CHECK(std::abs(dilog(x) - s) < 1e-15);
  }
  // Derivative identity d/dx Li₂(x) = −log(1 − x)/x across all branches.
  for (double x : {-50.0, -3.0, -0.7, 0.3, 0.8, 0.97}) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    const double d = (dilog(x + h) - dilog(x - h)) / (2 * h);
    CHECK(std::abs(d + std::log1p(-x) / x) < 1e-8);
  }
  CHECK_THROWS_AS(dilog(1.5), Error);
}

TEST_CASE("cigar family") {
  const auto c1 = make_cigar(2.0, 1.0);
  CHECK(c1.metric({cplx(0.0)})(0, 0) == cplx(1.0));
  CHECK(std::abs(c1.ricci_potential({cplx(std::sqrt(2.0))}) - std::log(2.0)) < 1e-15);
  CHECK(c1.soliton_h == 1.0);
  CHECK(c1.z_eigen == std::vector<double>{1.0});
  CHECK(c1.special_coordinates);

  const auto c2 = make_cigar(2.0, -1.0);
  CHECK(c2.in_domain({cplx(1.4, 0.0)}));
  CHECK(!c2.in_domain({cplx(1.0, 1.0)}));
  CHECK(std::abs(c2.metric({cplx(1.0)})(0, 0) - cplx(2.0)) < 1e-15);

  const auto flat = make_cigar(2.0, 0.0);
  for (double x : {0.0, 0.5, 2.0}) {
    CHECK(flat.metric({cplx(x)})(0, 0) == cplx(1.0));
    const auto r = ricci_from_metric(flat.metric, {cplx(x, 0.3)}, {});
    CHECK(std::abs(r.scalar) < 1e-12);
  }
  CHECK_THROWS_AS(make_cigar(0.0, 1.0), Error);
  CHECK_THROWS_AS(make_cigar(-1.0, 1.0), Error);
}

TEST_CASE("cigar potential is the dilogarithm expression") {
  const auto fam = make_cigar(3.0, 2.0);
  for (double r : {0.0, 0.1, 1.0, 5.0, 40.0}) {
    const double expect = -(2.0 / 2.0) * dilog(-2.0 * r / 3.0);
    CHECK(std::abs(fam.potential({cplx(std::sqrt(r))}) - expect) <= 1e-14 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("gauge: f = -log det g + gauge_constant and f(0) = 0") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& fam : {make_cigar(2.0, 1.0), make_cigar(3.0, 0.5), make_product({2.0, 5.0}, {1.0, 2.0}),
                          make_cao(2, 1.0), make_cao(3, 0.7), make_cao(2, -1.0)}) {
    ComplexPoint zero(fam.dim, cplx(0.0));
    CHECK(fam.ricci_potential(zero) == 0.0);
    for (int k = 0; k < 10; ++k) {
      ComplexPoint z;
      for (int i = 0; i < fam.dim; ++i) z.emplace_back(u(rng), u(rng));
      if (!fam.in_domain(z)) continue;
      const double lhs = fam.ricci_potential(z);
      const double rhs = -std::log(fam.metric(z).determinant().real()) + fam.gauge_constant;
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
  CHECK(std::abs(make_cigar(3.0, 1.0).gauge_constant - std::log(2.0 / 3.0)) < 1e-15);
  CHECK(make_cigar(2.0, 1.0).gauge_constant == 0.0);
}

TEST_CASE("product family") {
  const auto p = make_product({2.0, 2.0}, {1.0, 2.0});
  const auto ric = ricci_from_metric(p.metric, {cplx(0.0), cplx(0.0)}, {});
  CHECK(std::abs(ric.ricci(0, 0) - cplx(1.0)) < 1e-6);
  CHECK(std::abs(ric.ricci(1, 1) - cplx(2.0)) < 1e-6);
  CHECK(p.soliton_h == 3.0);

  const auto q = make_product({2.0, 2.0}, {1.0, 1.0});
  CHECK(std::abs(q.ricci_potential({cplx(std::sqrt(6.0)), cplx(0.0)}) - std::log(4.0)) < 1e-14);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto single = make_product({2.0}, {1.0});
  const auto cig = make_cigar(2.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const ComplexPoint z{cplx(u(rng), u(rng))};
    CHECK(single.metric(z) == cig.metric(z));
    CHECK(single.potential(z) == cig.potential(z));
  }
  CHECK_THROWS_AS(make_product({2.0, -1.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(make_product({2.0}, {1.0, 1.0}), Error);
}

TEST_CASE("products of one-dimensional families equal the direct product") {
  const auto direct = make_product({2.0, 3.0, 1.5}, {1.0, -0.5, 2.0});
  const auto combined = cartesian_product({make_cigar(2.0, 1.0), make_cigar(3.0, -0.5), make_cigar(1.5, 2.0)});
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CHECK(combined.soliton_h == direct.soliton_h);
  CHECK(combined.gauge_constant == doctest::Approx(direct.gauge_constant).epsilon(1e-15));
  for (int k = 0; k < 20; ++k) {
    ComplexPoint z;
    for (int i = 0; i < 3; ++i) z.emplace_back(u(rng), u(rng));
    CHECK(combined.metric(z) == direct.metric(z));
    CHECK(combined.potential(z) == doctest::Approx(direct.potential(z)).epsilon(1e-15));
    CHECK(combined.ricci_potential(z) == doctest::Approx(direct.ricci_potential(z)).epsilon(1e-15));
  }
}

TEST_CASE("cao_F values and limits") {
  CHECK(cao_F(2, 0.0).F == 0.0);
  CHECK(cao_F(2, 0.0).f == 0.0);
  CHECK(std::abs(cao_F(2, 1.0).F - 1.0) < 1e-14);
  CHECK(std::abs(cao_F(2, 1.0).f - std::sqrt(2.0)) < 1e-14);
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::abs(cao_F(n, -50.0).f + std::pow(std::tgamma(n + 1.0), 1.0 / n)) < 1e-6);
  }
  // Against quadrature of βⁿ⁻¹e^β on both sides of the series/direct switch.
  for (int n = 1; n <= 4; ++n) {
    for (double b : {-6.0, -1.3, -0.6, -0.2, -1e-3, 1e-6, 0.05, 0.4, 0.6, 0.99, 1.01, 3.0, 12.0}) {
      const double F = F_quadrature(n, b);
      const auto got = cao_F(n, b);
      CHECK(std::abs(got.F - F) <= 1e-11 * std::abs(F));
      // f is the real n-th root of nF with the sign of b.
      CHECK(std::abs(std::pow(std::abs(got.f), n) / n - std::abs(F)) <= 1e-11 * std::abs(F));
      CHECK((got.f > 0) == (b > 0));
    }
  }
}

TEST_CASE("Cao profile near the origin") {
  for (int n = 1; n <= 3; ++n) {
    for (double h : {1.0, 2.0, -1.0}) {
      const CaoProfile p(n, h);
      CHECK(p.a(0.0) == 1.0);
      CHECK(p.b(0.0) == 0.0);
      CHECK(std::abs(p.at(0.0).b_prime - h / 2.0) < 1e-15);
      // b(r) = (h/2) r − h²/(4(n+1)) r² + O(r³): first and second Taylor coefficients.
      const double c1 = richardson_limit([&](double r) { return p.b(r) / r; }, 0.02, 4);
      const double c2 = richardson_limit([&](double r) { return (p.b(r) - 0.5 * h * r) / (r * r); }, 0.02, 4);
      CHECK(std::abs(c1 - h / 2.0) < 1e-10);
      CHECK(std::abs(c2 + h * h / (4.0 * (n + 1))) < 1e-10);
    }
  }
}

TEST_CASE("Cao profile matches the series solution of its ODE") {
  for (int n = 1; n <= 3; ++n) {
    const auto a = cao_a_series(n, 30);
    CHECK(std::abs(a[1] + 1.0 / (n + 1)) < 1e-13);
    const double h = 1.0;
    const CaoProfile p(n, h);
    for (double r : {1e-4, 0.01, 0.1, 0.4}) {
      const double y = 0.5 * h * r;
      double s = 0.0;
      for (int k = 30; k >= 0; --k) s = s * y + a[k];
      CHECK(std::abs(p.a(r) - s) < 1e-13);
      // P(r) = ∫₀ʳ a = Σ a_k (h/2)^k r^{k+1}/(k+1).
      double P = 0.0;
      for (int k = 30; k >= 0; --k) P = P * y + a[k] / (k + 1);
      CHECK(std::abs(p.potential(r) - P * r) < 1e-13);
    }
  }
}

TEST_CASE("Cao inversion f(b(r)) = (h/2) r on 100 log-spaced radii") {
  for (int n = 1; n <= 3; ++n) {
    const CaoProfile p(n, 1.0);
    double prev = -1.0;
    for (int k = 0; k < 100; ++k) {
      const double r = std::pow(10.0, -6.0 + 12.0 * k / 99.0);
      const double b = p.b(r);
      const double y = 0.5 * r;
      CHECK(std::abs(cao_F(n, b).f - y) <= 1e-12 * std::max(1.0, y));
      CHECK(b > prev);
      prev = b;
    }
  }
  CHECK(std::abs(CaoProfile(1, 1.0).b(2.0) - std::log(2.0)) < 1e-12);
}

TEST_CASE("Cao profile on the incomplete side") {
  const CaoProfile p(2, -1.0);
  CHECK(std::abs(p.r_max() - 2.0 * std::sqrt(2.0)) < 1e-14);
  CHECK(p.contains(2.8));
  CHECK(!p.contains(2.83));
  try {
    p.b(3.0);
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OutOfDomain);
  }
  // b decreases towards −∞ as r → r_max.
  CHECK(p.b(2.8) < p.b(2.0));
  CHECK(p.b(2.0) < 0.0);
  CHECK(std::isinf(CaoProfile(3, 1.0).r_max()));
  CHECK_THROWS_AS(CaoProfile(0, 1.0), Error);
  CHECK_THROWS_AS(CaoProfile(2, 0.0), Error);
}

TEST_CASE("Cao derivative relations") {
  for (int n = 1; n <= 3; ++n) {
    const CaoProfile p(n, 1.0);
    for (double r : {1e-7, 0.05, 0.7, 3.0, 20.0}) {
      const auto pt = p.at(r);
      // b′ from the singular ODE b^{n−1} e^b b′ = (h/2)ⁿ r^{n−1}.
      const double y = 0.5 * r;
      CHECK(std::abs(std::pow(pt.b, n - 1) * std::exp(pt.b) * pt.b_prime - 0.5 * std::pow(y, n - 1)) <
            1e-12 * std::max(1.0, std::pow(y, n - 1)));
      // r a′ + a = (2/h) b′, with a′ by central differences.
      const double dr = 1e-5 * std::max(r, 1e-3);
      const double lo = std::max(0.0, r - dr);
      const double da = (p.a(r + dr) - p.a(lo)) / (r + dr - lo);
      if (r > 1e-3) CHECK(std::abs(p.r_a_prime(r) - r * da) < 1e-8 * std::max(1.0, std::abs(p.a(r))));
      CHECK(std::abs(p.r_a_prime(r) + p.a(r) - 2.0 * pt.b_prime) < 1e-12);
      CHECK(std::abs(p.a_prime(r) * r - p.r_a_prime(r)) < 1e-12);
    }
  }
}

TEST_CASE("Cao family") {
  const auto one = make_cao(1, 1.0);
  const auto cig = make_cigar(2.0, 1.0);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const ComplexPoint z{cplx(u(rng), u(rng))};
    CHECK(std::abs(one.metric(z)(0, 0) - cig.metric(z)(0, 0)) < 1e-12);
    CHECK(std::abs(one.potential(z) - cig.potential(z)) < 1e-12);
  }
  const auto two = make_cao(2, 1.0);
  CHECK(two.metric({cplx(0.0), cplx(0.0)}).isApprox(HermitianMatrix::Identity(2, 2), 1e-15));
  const auto ric = ricci_from_metric(two.metric, {cplx(0.0), cplx(0.0)}, {}, two.in_domain);
  CHECK(ric.ricci.isApprox(HermitianMatrix::Identity(2, 2), 1e-6));
  CHECK(two.soliton_h == 2.0);
  CHECK(two.z_eigen == std::vector<double>{1.0, 1.0});
  for (int k = 0; k < 10; ++k) {
    const ComplexPoint z{cplx(0.5 * u(rng), 0.5 * u(rng)), cplx(0.5 * u(rng), 0.5 * u(rng))};
    CHECK(std::abs(soliton_constant(two.metric, z, {}, two.in_domain) - 2.0) < 1e-6);
    // Closed-form metric against the FD Hessian of the quadrature potential.
    CHECK(metric_from_potential(two.potential, z, {}, two.in_domain).isApprox(two.metric(z), 1e-8));
  }
  CHECK_THROWS_AS(two.metric({cplx(1.0)}), Error);
}

TEST_CASE("Cao toric jet agrees with the metric") {
  const auto fam = make_cao(2, 1.0);
  const std::vector<double> r{0.3, 0.5};
  const auto jet = fam.toric(r);
  const CaoProfile p(2, 1.0);
  const double s = r[0] + r[1];
  CHECK(std::abs(jet.u - p.potential(s)) < 1e-15);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(jet.du[i] - r[i] * p.a(s)) < 1e-15);
    for (int j = 0; j < 2; ++j) {
      const double expect = (i == j ? r[i] * p.a(s) : 0.0) + r[i] * r[j] * p.a_prime(s);
      CHECK(std::abs(jet.ddu(i, j) - expect) < 1e-14);
    }
  }
}

TEST_CASE("cigar flow pullback") {
  const auto t0 = cigar_flow_pullback(2.0, 1.0, 0.0, cplx(0.7, 0.2));
  CHECK(t0.evolved == t0.pulled_back);
  CHECK(std::abs(t0.evolved - 2.0 / (2.0 + 0.53)) < 1e-15);
  const auto a = cigar_flow_pullback(2.0, 1.0, 0.5, cplx(1.0));
  CHECK(std::abs(a.evolved - 2.0 / (2.0 * M_E + 1.0)) < 1e-14);
  CHECK(std::abs(a.pulled_back - 2.0 / (2.0 * M_E + 1.0)) < 1e-14);
  const auto b = cigar_flow_pullback(2.0, 1.0, -1.0, cplx(0.0));
  CHECK(std::abs(b.evolved - M_E * M_E) < 1e-13);
  CHECK(std::abs(b.pulled_back - M_E * M_E) < 1e-13);
  CHECK_THROWS_AS(cigar_flow_pullback(2.0, -1.0, 0.0, cplx(3.0)), Error);
}
