#include "critmass/errors.hpp"

namespace critmass {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DegenerateExponents: return "DegenerateExponents";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ZeroProfile: return "ZeroProfile";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidDensity: return "InvalidDensity";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::IntersectionPoint: return "IntersectionPoint";
    case ErrorKind::RegimeMismatch: return "RegimeMismatch";
    case ErrorKind::IntersectionRequired: return "IntersectionRequired";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::SubcriticalMasses: return "SubcriticalMasses";
    case ErrorKind::MissingConstants: return "MissingConstants";
  }
  return "Unknown";
}

}  // namespace critmass
