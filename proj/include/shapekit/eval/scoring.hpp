// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/eval/judge.hpp"
#include "shapekit/eval/records.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shapekit::eval {

inline constexpr unsigned kDefaultRounds = 5;

struct RetryPolicy {
  unsigned max_retries = 3;                // extra attempts per round
  std::chrono::milliseconds backoff{200};  // doubled after each failure
};

struct ScoreRecord {
  std::string id;
  std::vector<double> rounds;   // K values in [0, 1]
  double s_a = 0.0;             // arithmetic mean of rounds
  unsigned flagged_rounds = 0;  // clamped or unparsable (scored 0) rounds
};

/// Mean of rounds; throws InvalidConfig if empty or a value leaves [0, 1].
ScoreRecord make_score(std::string id, std::vector<double> rounds, unsigned flagged = 0);

/// K independent judge calls. Throws JudgeUnavailable when a round gets no
/// reply at all after every retry.
ScoreRecord score_answer(const QARecord& record, Judge& judge, unsigned rounds = kDefaultRounds,
                         const RetryPolicy& retry = {}, std::uint64_t seed = 0);

struct ScoringRun {
  std::vector<ScoreRecord> scores;    // input order, unscored records omitted
  std::vector<std::string> unscored;  // ids that hit JudgeUnavailable
  std::vector<std::string> warnings;
};

/// Scores every record with at most `max_in_flight` concurrent judge calls.
/// Output order does not depend on scheduling.
ScoringRun score_all(std::span<const QARecord> records, Judge& judge,
                     unsigned rounds = kDefaultRounds, unsigned max_in_flight = 4,
                     const RetryPolicy& retry = {}, std::uint64_t seed = 0);

struct CapabilityScore {
  std::size_t count = 0;        // N_c: answered records in this capability
  std::optional<double> score;  // S_c, empty when count == 0
};

struct Report {
  std::array<CapabilityScore, 5> per_capability{};  // indexed like kCapabilities
  std::optional<double> total;                      // S_t over answered records
  std::size_t answered = 0;
  std::size_t total_records = 0;
  std::string judge;
  unsigned k_rounds = kDefaultRounds;
  std::uint64_t seed = 0;
  std::vector<std::string> unscored;
  std::size_t flagged_rounds = 0;
};

struct RunInfo {
  std::string judge;
  unsigned k_rounds = kDefaultRounds;
  std::uint64_t seed = 0;
};

/// S_c = sum of S_a over the capability / N_c; S_t = sum of S_a / N. Records
/// without a score count toward total_records only. A score whose id is not
/// among the records, or a repeated score id, throws ConsistencyError.
Report aggregate(std::span<const ScoreRecord> scores, std::span<const QARecord> records,
                 const RunInfo& info);

enum class ReportFormat { Json, Markdown };

/// Stable field order; markdown is a single Rec/Know/Gen/Spat/Emb/Total
/// row plus counts, with a dash placeholder for empty capabilities.
std::string emit_report(const Report& report, ReportFormat format);

/// Inverse of emit_report(.., Json). Throws ParseError / SchemaError.
Report report_from_json(std::string_view json);

}  // namespace shapekit::eval
