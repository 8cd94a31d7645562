#include "dst/error.hpp"

namespace dst {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveCost: return "NonPositiveCost";
    case ErrorKind::UnreachableTerminal: return "UnreachableTerminal";
    case ErrorKind::RootIsTerminal: return "RootIsTerminal";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::NoCoordinates: return "NoCoordinates";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::NotLaminar: return "NotLaminar";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::DuplicateSet: return "DuplicateSet";
    case ErrorKind::NoNeighbor: return "NoNeighbor";
    case ErrorKind::NotArborescence: return "NotArborescence";
    case ErrorKind::DisconnectedTerminals: return "DisconnectedTerminals";
    case ErrorKind::MissingCoordinates: return "MissingCoordinates";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::NoKnownOptima: return "NoKnownOptima";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace dst
