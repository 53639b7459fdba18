// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapekit {

enum class ErrorCode {
  EmptyInput = 1,
  InvalidCount,
  InvalidConfig,
  DegenerateFeature,
  InvalidCost,
  ParseError,
  InvalidBox,
  InvalidPose,
  EmptyView,
  SchemaError,
  ConsistencyError,
  JudgeUnavailable,
  IoError,
};

/// Stable identifier for an error code, e.g. "InvalidBox".
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace shapekit
