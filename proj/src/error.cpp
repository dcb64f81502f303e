#include "shaclup/error.hpp"

namespace shaclup {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::NameSortClash: return "NameSortClash";
    case ErrorKind::InvalidShapesGraph: return "InvalidShapesGraph";
    case ErrorKind::RecursiveConstraints: return "RecursiveConstraints";
    case ErrorKind::UnboundShapeName: return "UnboundShapeName";
    case ErrorKind::UnsupportedTargetShape: return "UnsupportedTargetShape";
    case ErrorKind::IncompleteSubstitution: return "IncompleteSubstitution";
    case ErrorKind::NonGroundAction: return "NonGroundAction";
    case ErrorKind::UnsubstitutablePosition: return "UnsubstitutablePosition";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::UnsupportedAction: return "UnsupportedAction";
    case ErrorKind::ProverUnavailable: return "ProverUnavailable";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace shaclup
