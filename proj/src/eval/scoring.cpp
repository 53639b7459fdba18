// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/eval/scoring.hpp"

#include "shapekit/error.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace shapekit::eval {

ScoreRecord make_score(std::string id, std::vector<double> rounds, unsigned flagged) {
  if (rounds.empty()) fail(ErrorCode::InvalidConfig, "score for '" + id + "' has no rounds");
  double sum = 0.0;
  for (double r : rounds) {
    if (!(r >= 0.0 && r <= 1.0))
      fail(ErrorCode::InvalidConfig, "round score outside [0, 1] for '" + id + "'");
    sum += r;
  }
  ScoreRecord out;
  out.s_a = sum / static_cast<double>(rounds.size());
  out.id = std::move(id);
  out.rounds = std::move(rounds);
  out.flagged_rounds = flagged;
  return out;
}

ScoreRecord score_answer(const QARecord& record, Judge& judge, unsigned rounds,
                         const RetryPolicy& retry, std::uint64_t seed) {
  if (rounds == 0) fail(ErrorCode::InvalidCount, "at least one scoring round is required");
  JudgeRequest req;
  req.question = record.question;
  req.ground_truth = record.ground_truth;
  req.model_answer = record.model_answer;
  req.prompt = render_prompt(record.question, record.ground_truth, record.model_answer);
  req.seed = seed;

  std::vector<double> values;
  values.reserve(rounds);
  unsigned flagged = 0;
  for (unsigned k = 0; k < rounds; ++k) {
    req.round = k;
    auto wait = retry.backoff;
    bool replied = false;
    std::optional<ParsedScore> parsed;
    std::string last_error;
    for (unsigned attempt = 0; attempt <= retry.max_retries; ++attempt) {
      if (attempt > 0 && wait.count() > 0) {
        std::this_thread::sleep_for(wait);
        wait *= 2;
      }
      try {
        auto reply = judge.complete(req);
        replied = true;
        parsed = parse_score(reply);
        if (parsed) break;
      } catch (const TransportError& e) {
        last_error = e.what();
      }
    }
    if (!replied)
      fail(ErrorCode::JudgeUnavailable, "judge unavailable for '" + record.id + "': " + last_error);
    if (!parsed) {
      values.push_back(0.0);
      ++flagged;
    } else {
      values.push_back(parsed->value);
      if (parsed->clamped) ++flagged;
    }
  }
  return make_score(record.id, std::move(values), flagged);
}

ScoringRun score_all(std::span<const QARecord> records, Judge& judge, unsigned rounds,
                     unsigned max_in_flight, const RetryPolicy& retry, std::uint64_t seed) {
  if (max_in_flight == 0) fail(ErrorCode::InvalidConfig, "max_in_flight must be positive");
  if (rounds == 0) fail(ErrorCode::InvalidCount, "at least one scoring round is required");

  struct Slot {
    std::optional<ScoreRecord> score;
    std::string error;
  };
  std::vector<Slot> slots(records.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      try {
        slots[i].score = score_answer(records[i], judge, rounds, retry, seed);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::JudgeUnavailable) {
          std::lock_guard lock(fatal_mu);
          if (!fatal) fatal = std::current_exception();
          next.store(records.size());
          return;
        }
        slots[i].error = e.what();
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        next.store(records.size());
        return;
      }
    }
  };

  std::size_t n_threads = std::min<std::size_t>(max_in_flight, records.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  ScoringRun run;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].score) {
      run.scores.push_back(std::move(*slots[i].score));
    } else {
      run.unscored.push_back(records[i].id);
      run.warnings.push_back("record '" + records[i].id + "' excluded: " + slots[i].error);
    }
  }
  return run;
}

Report aggregate(std::span<const ScoreRecord> scores, std::span<const QARecord> records,
                 const RunInfo& info) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].id, i);

  std::array<double, 5> sums{};
  std::vector<bool> used(records.size(), false);
  Report r;
  r.judge = info.judge;
  r.k_rounds = info.k_rounds;
  r.seed = info.seed;
  r.total_records = records.size();
  double total = 0.0;
  for (const auto& s : scores) {
    auto it = index.find(s.id);
    if (it == index.end()) fail(ErrorCode::ConsistencyError, "score '" + s.id + "' has no record");
    if (used[it->second]) fail(ErrorCode::ConsistencyError, "score '" + s.id + "' repeated");
    if (!(s.s_a >= 0.0 && s.s_a <= 1.0))
      fail(ErrorCode::ConsistencyError, "score '" + s.id + "' outside [0, 1]");
    used[it->second] = true;
    auto c = static_cast<std::size_t>(records[it->second].capability);
    sums[c] += s.s_a;
    ++r.per_capability[c].count;
    total += s.s_a;
    ++r.answered;
    r.flagged_rounds += s.flagged_rounds;
  }
  for (std::size_t c = 0; c < 5; ++c) {
    auto& pc = r.per_capability[c];
    if (pc.count > 0) pc.score = sums[c] / static_cast<double>(pc.count);
  }
  if (r.answered > 0) r.total = total / static_cast<double>(r.answered);
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!used[i]) r.unscored.push_back(records[i].id);
  return r;
}

}  // namespace shapekit::eval
