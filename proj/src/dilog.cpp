#include "gkrs/dilog.hpp"

#include <cmath>
#include <numbers>

#include "gkrs/error.hpp"

namespace gkrs {

namespace {

constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

// Σ x^k/k² for 0 ≤ x ≤ ½.
double dilog_series(double x) {
  double term = x, sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    term *= x;
  }
  return sum;
}

}  // namespace

double dilog(double x) {
  if (std::isnan(x) || x > 1.0) throw Error(Errc::OutOfDomain, "dilog needs a real argument <= 1");
  if (x == 1.0) return kZeta2;
  if (x == 0.0) return 0.0;
  if (x < -1.0) {
    const double l = std::log(-x);
    return -kZeta2 - 0.5 * l * l - dilog(1.0 / x);
  }
  if (x < 0.0) {
    // Landen: maps [−1, 0) onto (0, ½].
    const double l = std::log1p(-x);
    return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  if (x <= 0.5) return dilog_series(x);
  return kZeta2 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
}

}  // namespace gkrs
