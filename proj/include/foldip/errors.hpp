// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace foldip {

enum class ErrorCode {
  EmptyInstance,
  DimensionMismatch,
  InconsistentBounds,
  EntryTooLarge,
  BadObjective,
  NonConvexTerm,
  InfiniteBoundsUnsupported,
  BoxTooLarge,
  CapTooLarge,
  BoundViolated,
  EmptySupport,
  NotLaminar,
  NoRoot,
  ZeroMatrixBlock,
  ParseError,
  IterationLimit,
  InternalError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyInstance: return "EmptyInstance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InconsistentBounds: return "InconsistentBounds";
    case ErrorCode::EntryTooLarge: return "EntryTooLarge";
    case ErrorCode::BadObjective: return "BadObjective";
    case ErrorCode::NonConvexTerm: return "NonConvexTerm";
    case ErrorCode::InfiniteBoundsUnsupported: return "InfiniteBoundsUnsupported";
    case ErrorCode::BoxTooLarge: return "BoxTooLarge";
    case ErrorCode::CapTooLarge: return "CapTooLarge";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NotLaminar: return "NotLaminar";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::ZeroMatrixBlock: return "ZeroMatrixBlock";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::InternalError: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace foldip
