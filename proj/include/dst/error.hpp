#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dst {

enum class ErrorKind {
  NonPositiveCost,
  UnreachableTerminal,
  RootIsTerminal,
  InvalidInstance,
  SyntaxError,
  CountMismatch,
  MissingSection,
  NoCoordinates,
  IoError,
  NotLaminar,
  NotAdmissible,
  DuplicateSet,
  NoNeighbor,
  NotArborescence,
  DisconnectedTerminals,
  MissingCoordinates,
  Infeasible,
  Unreachable,
  NoKnownOptima,
  Usage,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports carries one of the kinds above so the
// CLI can map them to exit codes and callers can branch on them in tests.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dst
