#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shaclup {

enum class ErrorKind {
  Syntax,
  NameSortClash,
  InvalidShapesGraph,
  RecursiveConstraints,
  UnboundShapeName,
  UnsupportedTargetShape,
  IncompleteSubstitution,
  NonGroundAction,
  UnsubstitutablePosition,
  BudgetExceeded,
  UnsupportedConstruct,
  UnsupportedAction,
  ProverUnavailable,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace shaclup
