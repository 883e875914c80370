#pragma once

// Holomorphic data attached to the linear field Z_h = Σ h_j z^j ∂/∂z^j:
// its complex flow, the lattice Λ_h = ℤⁿ ∩ h^⊥, and the dimension d_h of the
// group of polynomial automorphisms commuting with Z_h.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "gkrs/ckgeom.hpp"

namespace gkrs {

using Rational = boost::rational<std::int64_t>;
using IntVector = std::vector<std::int64_t>;

/// Eigenvalue tuple h = (h₁, …, hₙ).  Entries parsed from "p/q" or finite
/// decimal strings carry an exact rational; entries built from doubles do not,
/// and the lattice and resonance computations reject them.
class EigenData {
 public:
  static EigenData from_rationals(std::vector<Rational> h);
  static EigenData from_reals(std::vector<double> h);
  /// Comma-separated list, e.g. "1,3/2,0.25".
  static EigenData parse(std::string_view text);

  std::size_t size() const { return values_.size(); }
  bool exact() const { return exact_.has_value(); }
  const std::vector<Rational>& rationals() const;
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
};

Rational parse_rational(std::string_view token);

struct LatticeResult {
  std::vector<IntVector> basis;  // Hermite normal form rows
  int rank = 0;
  int q_rank = 0;  // n − rank
};

struct ResonancePair {
  int i = 0;  // 0-based target index
  IntVector k;
};

struct ResonanceResult {
  std::vector<ResonancePair> pairs;
  int d_h = 0;
};

/// z^i ↦ e^{h_i t} z^i.
ComplexPoint flow_Zh(const EigenData& h, cplx t, const ComplexPoint& z);

LatticeResult lattice_basis(const EigenData& h);

/// Every (i, k) with k ∈ ℤⁿ, k ≥ 0 and k·h = h_i.
ResonanceResult resonances(const EigenData& h);

/// Row Hermite normal form of an integer matrix (zero rows dropped).
std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows);

/// Exact k·h.
Rational dot(const IntVector& k, const std::vector<Rational>& h);

}  // namespace gkrs
