// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/eval/scoring.hpp"

#include "shapekit/detail/numfmt.hpp"
#include "shapekit/error.hpp"

#include <json.hpp>

namespace shapekit::eval {

namespace {

using ojson = nlohmann::ordered_json;

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string cell(const std::optional<double>& v) {
  return v ? detail::shortest(*v) : std::string("\xE2\x80\x94");
}

std::string md_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

std::optional<double> read_score(const ojson& v, const std::string& what) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) fail(ErrorCode::SchemaError, what + " must be a number or null");
  double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) fail(ErrorCode::SchemaError, what + " outside [0, 1]");
  return d;
}

template <typename T>
T read_uint(const ojson& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned())
    fail(ErrorCode::SchemaError, std::string("field '") + key + "' must be a non-negative integer");
  return it->get<T>();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ojson j;
    j["total"] = optional_number(r.total);
    ojson per = ojson::object();
    ojson counts = ojson::object();
    for (std::size_t c = 0; c < 5; ++c) {
      std::string name(capability_name(kCapabilities[c]));
      per[name] = optional_number(r.per_capability[c].score);
      counts[name] = r.per_capability[c].count;
    }
    j["per_capability"] = std::move(per);
    j["counts"] = std::move(counts);
    j["judge"] = r.judge;
    j["k_rounds"] = r.k_rounds;
    j["answered"] = r.answered;
    j["total_records"] = r.total_records;
    j["seed"] = r.seed;
    j["unscored"] = r.unscored;
    j["flagged_rounds"] = r.flagged_rounds;
    return j.dump(2) + "\n";
  }

  std::vector<std::string> head{""}, values{"Score"}, counts{"N"};
  for (std::size_t c = 0; c < 5; ++c) {
    head.emplace_back(capability_name(kCapabilities[c]));
    values.push_back(cell(r.per_capability[c].score));
    counts.push_back(std::to_string(r.per_capability[c].count));
  }
  head.emplace_back("Total");
  values.push_back(cell(r.total));
  counts.push_back(std::to_string(r.answered));

  std::string out = md_row(head);
  out += md_row(std::vector<std::string>(head.size(), "---"));
  out += md_row(values);
  out += md_row(counts);
  out += "\njudge: " + r.judge + ", K = " + std::to_string(r.k_rounds) +
         ", seed = " + std::to_string(r.seed) + ", answered " + std::to_string(r.answered) +
         " of " + std::to_string(r.total_records) + ", flagged rounds " +
         std::to_string(r.flagged_rounds) + "\n";
  return out;
}

Report report_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) fail(ErrorCode::SchemaError, "report must be a JSON object");
  Report r;
  if (!j.contains("total")) fail(ErrorCode::SchemaError, "missing field 'total'");
  r.total = read_score(j["total"], "total");
  auto per = j.find("per_capability");
  auto counts = j.find("counts");
  if (per == j.end() || !per->is_object() || counts == j.end() || !counts->is_object())
    fail(ErrorCode::SchemaError, "per_capability and counts must be objects");
  for (std::size_t c = 0; c < 5; ++c) {
    std::string name(capability_name(kCapabilities[c]));
    if (!per->contains(name)) fail(ErrorCode::SchemaError, "per_capability lacks " + name);
    r.per_capability[c].score = read_score((*per)[name], "per_capability." + name);
    r.per_capability[c].count = read_uint<std::size_t>(*counts, name.c_str());
    if ((r.per_capability[c].count == 0) != !r.per_capability[c].score)
      fail(ErrorCode::SchemaError, "score and count disagree for " + name);
  }
  auto judge = j.find("judge");
  if (judge == j.end() || !judge->is_string())
    fail(ErrorCode::SchemaError, "field 'judge' must be a string");
  r.judge = judge->get<std::string>();
  r.k_rounds = read_uint<unsigned>(j, "k_rounds");
  r.answered = read_uint<std::size_t>(j, "answered");
  r.total_records = read_uint<std::size_t>(j, "total_records");
  if (j.contains("seed")) r.seed = read_uint<std::uint64_t>(j, "seed");
  if (j.contains("flagged_rounds")) r.flagged_rounds = read_uint<std::size_t>(j, "flagged_rounds");
  if (auto u = j.find("unscored"); u != j.end()) {
    if (!u->is_array()) fail(ErrorCode::SchemaError, "field 'unscored' must be an array");
    for (const auto& id : *u) {
      if (!id.is_string()) fail(ErrorCode::SchemaError, "unscored ids must be strings");
      r.unscored.push_back(id.get<std::string>());
    }
  }
  std::size_t sum = 0;
  for (const auto& pc : r.per_capability) sum += pc.count;
  if (sum != r.answered)
    fail(ErrorCode::ConsistencyError, "capability counts do not sum to answered");
  if (r.answered > r.total_records)
    fail(ErrorCode::ConsistencyError, "answered exceeds total_records");
  if ((r.answered == 0) != !r.total) fail(ErrorCode::SchemaError, "total and answered disagree");
  return r;
}

}  // namespace shapekit::eval
