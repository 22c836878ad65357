#include "lfends/error.hpp"

namespace lfends {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DisconnectedInput: return "DisconnectedInput";
    case ErrorKind::NonSimpleInput: return "NonSimpleInput";
    case ErrorKind::CompactumTouchesWindowBoundary: return "CompactumTouchesWindowBoundary";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::RayNotProperInWindow: return "RayNotProperInWindow";
    case ErrorKind::BadIndices: return "BadIndices";
    case ErrorKind::DepthOutOfRange: return "DepthOutOfRange";
    case ErrorKind::NotProper: return "NotProper";
    case ErrorKind::DepthMismatch: return "DepthMismatch";
    case ErrorKind::EmptyLevelAfterNormalization: return "EmptyLevelAfterNormalization";
    case ErrorKind::NotRayEfficient: return "NotRayEfficient";
    case ErrorKind::NonInjectiveEndMap: return "NonInjectiveEndMap";
    case ErrorKind::TowerMismatch: return "TowerMismatch";
    case ErrorKind::PrefixTooShallow: return "PrefixTooShallow";
    case ErrorKind::IncoherentPrefix: return "IncoherentPrefix";
    case ErrorKind::AlignmentFailure: return "AlignmentFailure";
    case ErrorKind::EmptyTower: return "EmptyTower";
    case ErrorKind::RoutingFailed: return "RoutingFailed";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lfends
