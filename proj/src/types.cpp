#include "semiframe/types.hpp"

namespace semiframe {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidWeight: return "InvalidWeight";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LatticeMismatch: return "LatticeMismatch";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::InvalidFamily: return "InvalidFamily";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::InadmissibleProfile: return "InadmissibleProfile";
    case ErrorKind::MissingProfile: return "MissingProfile";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotTotal: return "NotTotal";
    case ErrorKind::OffRange: return "OffRange";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NotDualPair: return "NotDualPair";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotUnitary: return "NotUnitary";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotTotal:
    case ErrorKind::OffRange:
    case ErrorKind::DomainViolation:
    case ErrorKind::NotDualPair:
    case ErrorKind::NotInvertible:
    case ErrorKind::NotUnitary:
      return true;
    default:
      return false;
  }
}

}  // namespace semiframe
