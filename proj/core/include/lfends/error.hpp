#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfends {

/// Named failure conditions. The CLI prints them as `ERR:<Name>`.
enum class ErrorKind {
  UnknownVertex,
  BudgetExceeded,
  ParseError,
  DisconnectedInput,
  NonSimpleInput,
  CompactumTouchesWindowBoundary,
  WindowTooSmall,
  RayNotProperInWindow,
  BadIndices,
  DepthOutOfRange,
  NotProper,
  DepthMismatch,
  EmptyLevelAfterNormalization,
  NotRayEfficient,
  NonInjectiveEndMap,
  TowerMismatch,
  PrefixTooShallow,
  IncoherentPrefix,
  AlignmentFailure,
  EmptyTower,
  RoutingFailed,
  InvalidArgument,
  InvariantViolation,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace lfends
