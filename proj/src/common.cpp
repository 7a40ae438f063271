#include "hkale/common.hpp"

namespace hkale {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonClosure: return "NonClosure";
    case ErrorKind::NotInSU2: return "NotInSU2";
    case ErrorKind::DecompositionFailed: return "DecompositionFailed";
    case ErrorKind::NotADE: return "NotADE";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInF: return "NotInF";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::ProjectionDefect: return "ProjectionDefect";
    case ErrorKind::SampleMismatch: return "SampleMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hkale
