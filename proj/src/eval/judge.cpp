// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/eval/judge.hpp"

#include "shapekit/detail/numfmt.hpp"
#include "shapekit/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <unordered_map>
#include <vector>

namespace shapekit::eval {

namespace {

constexpr std::string_view kTemplateHead =
    "Compare the ground truth and prediction from AI models, to give a correctness score for "
    "the prediction. <AND> in the ground truth means it is totally right only when all elements "
    "in the ground truth are present in the prediction, and <OR> means it is totally right when "
    "any one element in the ground truth is present in the prediction. The correctness score is "
    "0.0 (totally wrong), 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, or 1.0 (totally right). "
    "Just complete the last space of the correctness score.\n"
    "\n"
    "Question | Ground truth | Prediction | Correctness\n"
    "--- | --- | --- | ---\n"
    "What is this object? | chair | The object is a chair with four legs. | 1.0\n"
    "What is this object? | chair | This is a table. | 0.0\n"
    "How many wheels does the vehicle have? | 4 | The car has four wheels. | 1.0\n"
    "What colors is the mug? | white <AND> blue | The mug is white. | 0.5\n"
    "Which part can be grasped? | handle <OR> rim | You can hold it by the handle. | 1.0\n"
    "Is the lid above or below the body? | above | It is on the bottom. | 0.0\n"
    "Describe the shape in detail. | A wooden stool with three legs and a round seat. | "
    "A round-topped stool. | 0.6\n";

std::string one_line(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  std::replace(out.begin(), out.end(), '|', '/');
  return out;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string render_prompt(std::string_view question, std::string_view ground_truth,
                          std::string_view model_answer) {
  std::string out(kTemplateHead);
  out += one_line(question);
  out += " | ";
  out += one_line(ground_truth);
  out += " | ";
  out += one_line(model_answer);
  out += " |";
  return out;
}

std::optional<ParsedScore> parse_score(std::string_view reply) {
  std::optional<double> first;
  std::size_t i = 0;
  while (i < reply.size()) {
    bool lead_dot = reply[i] == '.' && i + 1 < reply.size() && is_digit(reply[i + 1]);
    if (!is_digit(reply[i]) && !lead_dot) {
      ++i;
      continue;
    }
    std::size_t start = i;
    bool negative = start > 0 && reply[start - 1] == '-';
    while (i < reply.size() && is_digit(reply[i])) ++i;
    if (i + 1 < reply.size() && reply[i] == '.' && is_digit(reply[i + 1])) {
      ++i;
      while (i < reply.size() && is_digit(reply[i])) ++i;
    }
    std::string text(reply.substr(start, i - start));
    if (text.front() == '.') text.insert(text.begin(), '0');
    auto v = detail::parse_double(text);
    if (!v) continue;
    double value = negative ? -*v : *v;
    if (value >= 0.0 && value <= 1.0) return ParsedScore{value, false};
    if (!first) first = value;
  }
  if (!first) return std::nullopt;
  return ParsedScore{std::clamp(*first, 0.0, 1.0), true};
}

double token_f1(std::string_view answer, std::string_view truth) {
  auto a = tokens(answer);
  auto t = tokens(truth);
  if (a.empty() && t.empty()) return 1.0;
  if (a.empty() || t.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> bag;
  for (auto& w : t) ++bag[w];
  std::size_t common = 0;
  for (auto& w : a) {
    auto it = bag.find(w);
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / static_cast<double>(a.size());
  double recall = static_cast<double>(common) / static_cast<double>(t.size());
  return 2.0 * precision * recall / (precision + recall);
}

std::string StubJudge::complete(const JudgeRequest& request) {
  return detail::shortest(token_f1(request.model_answer, request.ground_truth));
}

HttpJudgeConfig HttpJudgeConfig::from_env() {
  auto get = [](const char* name) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : std::string();
  };
  HttpJudgeConfig cfg;
  cfg.endpoint = get("JUDGE_ENDPOINT");
  cfg.model = get("JUDGE_MODEL");
  cfg.api_key = get("JUDGE_API_KEY");
  if (cfg.endpoint.empty()) fail(ErrorCode::InvalidConfig, "JUDGE_ENDPOINT is not set");
  return cfg;
}

HttpJudge::HttpJudge(HttpJudgeConfig config) : config_(std::move(config)) {
  const auto& url = config_.endpoint;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    fail(ErrorCode::InvalidConfig, "judge endpoint must start with http:// or https://");
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https")
    fail(ErrorCode::InvalidConfig, "unsupported judge endpoint scheme '" + scheme + "'");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") fail(ErrorCode::InvalidConfig, "built without TLS support");
#endif
  auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (base_.size() <= scheme_end + 3) fail(ErrorCode::InvalidConfig, "judge endpoint has no host");
}

std::string HttpJudge::id() const {
  return config_.model.empty() ? "http" : "http:" + config_.model;
}

std::string HttpJudge::complete(const JudgeRequest& request) {
  nlohmann::ordered_json body;
  if (!config_.model.empty()) body["model"] = config_.model;
  body["messages"] =
      nlohmann::ordered_json::array({{{"role", "user"}, {"content", request.prompt}}});
  body["seed"] = request.seed + request.round;

  httplib::Client client(base_);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) throw TransportError("judge request failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportError("judge returned HTTP " + std::to_string(res->status));
  try {
    auto reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed judge response: ") + e.what());
  }
}

}  // namespace shapekit::eval
