#pragma once

namespace gkrs {

/// Real dilogarithm Li₂(x) = −∫₀ˣ log(1 − t)/t dt for x ≤ 1.
double dilog(double x);

}  // namespace gkrs
