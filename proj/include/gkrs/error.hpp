#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gkrs {

enum class Errc {
  DomainTooSmall,
  NonFinite,
  SingularMetric,
  InvalidParam,
  OutOfDomain,
  IrrationalInput,
  NonPositiveEigenvalue,
  ShapeMismatch,
  DimensionTooLarge,
  DegenerateInitialData,
  NonConvergent,
  OutOfTrustRegion,
  ConstraintViolation,
  ParseError,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::DomainTooSmall: return "DomainTooSmall";
    case Errc::NonFinite: return "NonFinite";
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::InvalidParam: return "InvalidParam";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::IrrationalInput: return "IrrationalInput";
    case Errc::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::DegenerateInitialData: return "DegenerateInitialData";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::OutOfTrustRegion: return "OutOfTrustRegion";
    case Errc::ConstraintViolation: return "ConstraintViolation";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gkrs
