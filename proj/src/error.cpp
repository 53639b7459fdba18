// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/error.hpp"

namespace shapekit {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput:
      return "EmptyInput";
    case ErrorCode::InvalidCount:
      return "InvalidCount";
    case ErrorCode::InvalidConfig:
      return "InvalidConfig";
    case ErrorCode::DegenerateFeature:
      return "DegenerateFeature";
    case ErrorCode::InvalidCost:
      return "InvalidCost";
    case ErrorCode::ParseError:
      return "ParseError";
    case ErrorCode::InvalidBox:
      return "InvalidBox";
    case ErrorCode::InvalidPose:
      return "InvalidPose";
    case ErrorCode::EmptyView:
      return "EmptyView";
    case ErrorCode::SchemaError:
      return "SchemaError";
    case ErrorCode::ConsistencyError:
      return "ConsistencyError";
    case ErrorCode::JudgeUnavailable:
      return "JudgeUnavailable";
    case ErrorCode::IoError:
      return "IoError";
  }
  return "Unknown";
}

}  // namespace shapekit
