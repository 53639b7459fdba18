// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shapekit::eval {

struct JudgeRequest {
  std::string_view question;
  std::string_view ground_truth;
  std::string_view model_answer;
  std::string prompt;      // rendered grading template
  unsigned round = 0;      // 0-based scoring round
  std::uint64_t seed = 0;  // run seed, forwarded to judges that accept one
};

/// Raised by a judge when the call itself failed (connection, HTTP status,
/// malformed envelope). Retried by the scorer.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Prompt in, reply text out. Implementations must be safe to call from
/// several threads at once.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const JudgeRequest& request) = 0;
};

/// Few-shot grading prompt for one answer.
std::string render_prompt(std::string_view question, std::string_view ground_truth,
                          std::string_view model_answer);

struct ParsedScore {
  double value = 0.0;
  bool clamped = false;
};

/// The first number in [0, 1] wins. Failing that, the first number is
/// clamped into [0, 1] and flagged. No number at all gives nullopt.
std::optional<ParsedScore> parse_score(std::string_view reply);

/// Token-level F1 between model answer and ground truth (lower-cased
/// alphanumeric runs, multiset overlap). Both empty counts as 1.
double token_f1(std::string_view answer, std::string_view truth);

/// Offline judge replying with token_f1 of the request. Pure function of
/// (question, ground_truth, model_answer).
class StubJudge final : public Judge {
 public:
  std::string id() const override { return "stub"; }
  std::string complete(const JudgeRequest& request) override;
};

struct HttpJudgeConfig {
  std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  std::chrono::milliseconds timeout{60000};

  /// Reads JUDGE_ENDPOINT, JUDGE_MODEL and JUDGE_API_KEY. Throws
  /// InvalidConfig when the endpoint is unset.
  static HttpJudgeConfig from_env();
};

/// OpenAI-style chat-completions client: one user message carrying the
/// prompt, reply taken from choices[0].message.content.
class HttpJudge final : public Judge {
 public:
  explicit HttpJudge(HttpJudgeConfig config);
  std::string id() const override;
  std::string complete(const JudgeRequest& request) override;

 private:
  HttpJudgeConfig config_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace shapekit::eval
