// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shapekit::eval {

enum class Capability { Rec, Know, Gen, Spat, Emb };

inline constexpr std::array<Capability, 5> kCapabilities{
    Capability::Rec, Capability::Know, Capability::Gen, Capability::Spat, Capability::Emb};

std::string_view capability_name(Capability c) noexcept;
std::optional<Capability> capability_from_name(std::string_view name) noexcept;

struct QARecord {
  std::string id;
  Capability capability = Capability::Rec;
  std::string question;
  std::string ground_truth;
  std::string model_answer;  // empty when the line carries none
};

/// One JSON object per line with string fields id, capability, question,
/// ground_truth and optionally model_answer. Blank lines are skipped.
/// Malformed JSON throws ParseError; missing fields, unknown capabilities
/// and duplicate ids throw SchemaError. Messages carry the line number.
std::vector<QARecord> ingest(std::istream& in);
std::vector<QARecord> ingest(const std::filesystem::path& path);

}  // namespace shapekit::eval
