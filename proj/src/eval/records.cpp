// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/eval/records.hpp"

#include "shapekit/error.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <unordered_set>

namespace shapekit::eval {

std::string_view capability_name(Capability c) noexcept {
  switch (c) {
    case Capability::Rec:
      return "Rec";
    case Capability::Know:
      return "Know";
    case Capability::Gen:
      return "Gen";
    case Capability::Spat:
      return "Spat";
    case Capability::Emb:
      return "Emb";
  }
  return "?";
}

std::optional<Capability> capability_from_name(std::string_view name) noexcept {
  for (auto c : kCapabilities)
    if (capability_name(c) == name) return c;
  return std::nullopt;
}

namespace {

std::string prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

std::string string_field(const nlohmann::json& obj, const char* key, bool required,
                         std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) fail(ErrorCode::SchemaError, prefix(line_no) + "missing field '" + key + "'");
    return {};
  }
  if (!it->is_string())
    fail(ErrorCode::SchemaError, prefix(line_no) + "field '" + key + "' must be a string");
  return it->get<std::string>();
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

std::vector<QARecord> ingest(std::istream& in) {
  std::vector<QARecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::ParseError, prefix(line_no) + e.what());
    }
    if (!obj.is_object()) fail(ErrorCode::ParseError, prefix(line_no) + "expected a JSON object");

    QARecord rec;
    rec.id = string_field(obj, "id", true, line_no);
    auto cap_text = string_field(obj, "capability", true, line_no);
    auto cap = capability_from_name(cap_text);
    if (!cap)
      fail(ErrorCode::SchemaError, prefix(line_no) + "unknown capability '" + cap_text + "'");
    rec.capability = *cap;
    rec.question = string_field(obj, "question", true, line_no);
    rec.ground_truth = string_field(obj, "ground_truth", true, line_no);
    rec.model_answer = string_field(obj, "model_answer", false, line_no);
    if (!seen.insert(rec.id).second)
      fail(ErrorCode::SchemaError, prefix(line_no) + "duplicate id '" + rec.id + "'");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<QARecord> ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return ingest(in);
}

}  // namespace shapekit::eval
