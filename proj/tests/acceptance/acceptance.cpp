// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "oracles.hpp"
#include "shapekit/box6d/box.hpp"
#include "shapekit/corrupt/corrupt.hpp"
#include "shapekit/encoder/config.hpp"
#include "shapekit/encoder/encoder.hpp"
#include "shapekit/encoder/weights.hpp"
#include "shapekit/error.hpp"
#include "shapekit/eval/judge.hpp"
#include "shapekit/eval/records.hpp"
#include "shapekit/eval/scoring.hpp"
#include "shapekit/match/assignment.hpp"
#include "shapekit/pc/point_cloud.hpp"
#include "shapekit/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace shapekit;
using encoder::EncoderConfig;
using encoder::Matrix;
using encoder::Variant;
using match::CostMatrix;
using match::FeatureMatrix;
using pc::Point;
using pc::PointCloud;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects the first few failure messages of one criterion.
class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    if (failures_ <= 3) return messages_;
    return messages_ + "; +" + std::to_string(failures_ - 3) + " more";
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  const std::string& notes() const { return notes_; }

 private:
  int failures_ = 0;
  std::string messages_;
  std::string notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

box6d::OrientedBox make_box(const oracle::BoxPose& p) {
  return box6d::corners_from_pose(p.center, p.half, p.rot);
}

std::vector<std::size_t> sigma_of(const CostMatrix& c) { return match::hungarian(c).sigma; }

// ---- criteria

void assignment_optimality(Verdict& v) {
  SplitMix64 rng(1000);
  double solver_time = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const CostMatrix c = oracle::random_matrix(rng, 7, 7, -5.0, 5.0);
    const auto start = Clock::now();
    const auto got = match::hungarian(c);
    solver_time += seconds_since(start);
    const auto want = oracle::brute_force(c);
    v.expect(got.total_cost == want.cost, "matrix " + std::to_string(t) + " cost " +
                                              fmt(got.total_cost) + " vs " + fmt(want.cost));
  }
  v.expect(solver_time < 5.0, "solver took " + fmt(solver_time) + " s");
  v.note("solver " + fmt(solver_time) + " s");
}

void fps_oracle(Verdict& v) {
  SplitMix64 rng(200);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n_s = 1 + rng.below(64);
    const std::size_t n = n_s + rng.below(256 - n_s + 1);
    const std::size_t start = rng.below(n);
    const auto pts = oracle::random_points(rng, n);
    const auto got = pc::fps(PointCloud(pts), n_s, start).indices;
    v.expect(got == oracle::fps(pts, n_s, start), "cloud " + std::to_string(t));
  }
}

void iou_analytic(Verdict& v) {
  SplitMix64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto box = make_box(oracle::random_box(rng, 5.0));
    const double same = box6d::iou(box, box);
    v.expect(std::abs(same - 1.0) <= 1e-12, "identical boxes gave " + fmt(same));
  }

  const Eigen::Vector3d half(0.5, 0.5, 0.5);
  const auto unit = box6d::corners_from_pose({0.5, 0.5, 0.5}, half, Eigen::Matrix3d::Identity());
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Vector3d centre(0.5, 0.5, 0.5);
    centre[axis] += 0.5;
    const auto shifted = box6d::corners_from_pose(centre, half, Eigen::Matrix3d::Identity());
    const double got = box6d::iou(unit, shifted);
    v.expect(std::abs(got - 1.0 / 3.0) <= 1e-9, "half offset gave " + fmt(got));
  }
  for (int t = 0; t < 100; ++t) {
    const auto pose = oracle::random_box(rng, 2.0);
    oracle::BoxPose moved = pose;
    moved.center += pose.rot.col(t % 3) * pose.half[t % 3];
    const double got = box6d::iou(make_box(pose), make_box(moved));
    v.expect(std::abs(got - 1.0 / 3.0) <= 1e-9, "rotated half offset gave " + fmt(got));
  }

  for (int t = 0; t < 500; ++t) {
    const auto outer = oracle::random_box(rng, 3.0);
    oracle::BoxPose inner = outer;
    inner.half = outer.half.cwiseProduct(
        Eigen::Vector3d(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)));
    const double slack = (outer.half - inner.half).minCoeff();
    inner.center += outer.rot *
                    Eigen::Vector3d(rng.uniform(-slack, slack), rng.uniform(-slack, slack),
                                    rng.uniform(-slack, slack)) /
                    std::sqrt(3.0);
    const auto a = make_box(outer), b = make_box(inner);
    const double want = inner.half.prod() / outer.half.prod();
    v.expect(std::abs(box6d::iou(a, b) - want) <= 1e-9, "containment " + std::to_string(t));
    v.expect(std::abs(box6d::iou(b, a) - want) <= 1e-9, "containment swapped " + std::to_string(t));
  }
}

void iou_monte_carlo(Verdict& v) {
  SplitMix64 rng(60);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto pa = oracle::random_box(rng);
    const auto pb = oracle::random_box(rng);
    const double exact = box6d::iou(make_box(pa), make_box(pb));
    const double sampled = oracle::monte_carlo_iou(pa, pb, 1000000);
    worst = std::max(worst, std::abs(exact - sampled));
    v.expect(std::abs(exact - sampled) <= 0.005,
             "pair " + std::to_string(t) + " " + fmt(exact) + " vs " + fmt(sampled));
  }
  const double elapsed = seconds_since(start);
  v.expect(elapsed < 60.0, "took " + fmt(elapsed) + " s");
  v.note("max |delta| " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void gradient_check(Verdict& v) {
  SplitMix64 rng(100);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t d = 2 + rng.below(15);
    const FeatureMatrix views = oracle::random_matrix(rng, n, d);
    const FeatureMatrix queries = oracle::random_matrix(rng, n, d);
    const auto sigma = sigma_of(match::cosine_cost(views, queries));
    const auto got = match::alignment_loss(views, queries, sigma);
    const auto numeric = oracle::fd_gradient(views, queries, sigma, 1e-5);
    const double rel = (got.grad_queries - numeric).norm() / std::max(numeric.norm(), 1e-8);
    worst = std::max(worst, rel);
    v.expect(rel <= 1e-4, "instance " + std::to_string(t) + " relative error " + fmt(rel));
    v.expect(std::abs(got.loss - oracle::alignment_loss(views, queries, sigma)) <= 1e-12,
             "loss value " + std::to_string(t));
  }
  v.note("max relative error " + fmt(worst));
}

struct RowSumProbe {
  double worst = 0.0;
  std::size_t calls = 0;
  encoder::AttentionObserver observer() {
    return [this](std::string_view, std::size_t, std::size_t, const Matrix& p) {
      ++calls;
      for (Eigen::Index i = 0; i < p.rows(); ++i)
        worst = std::max(worst, std::abs(p.row(i).sum() - 1.0));
    };
  }
};

void encoder_contracts(Verdict& v) {
  struct Expected {
    Variant variant;
    std::size_t layers, hidden, heads;
  };
  const Expected table[] = {
      {Variant::S, 12, 384, 6}, {Variant::B, 12, 768, 12}, {Variant::L, 24, 1024, 16}};
  SplitMix64 rng(512);
  const PointCloud cloud = pc::normalize_unit_sphere(PointCloud(oracle::random_points(rng, 4096)));
  const std::size_t n_s = 512, k = 32;

  for (const auto& row : table) {
    const std::string name(encoder::variant_name(row.variant));
    const auto cfg = EncoderConfig::for_variant(row.variant);
    v.expect(cfg.layers == row.layers && cfg.hidden == row.hidden && cfg.heads == row.heads,
             name + " sizing");
    v.expect(cfg.prompt_length == 32, name + " default Q");
    const auto bank = encoder::WeightBank::generate(cfg, 7);

    const auto tokens = encoder::embed_tokens(pc::knn_group(cloud, pc::fps(cloud, n_s), k), bank);
    RowSumProbe probe;
    encoder::EncodeOptions opts;
    opts.observer = probe.observer();
    const auto enc = encoder::encode(tokens, bank, cfg, opts);
    const auto g1 = static_cast<Eigen::Index>(cfg.num_image_queries + 1);
    v.expect(enc.local.rows() == 512 && enc.local.cols() == static_cast<Eigen::Index>(row.hidden),
             name + " e_local shape");
    v.expect(enc.global.rows() == g1 && enc.global.cols() == static_cast<Eigen::Index>(row.hidden),
             name + " e_global shape");
    v.expect(probe.calls == row.layers * row.heads + row.heads, name + " attention count");
    v.expect(probe.worst <= 1e-6, name + " attention row sum off by " + fmt(probe.worst));

    const auto start = Clock::now();
    const auto bundle = encoder::represent(cloud, bank, cfg, encoder::TokenizeOptions{n_s, k, 0});
    const double elapsed = seconds_since(start);
    const auto assembled = encoder::assemble(bundle);
    const auto q = static_cast<Eigen::Index>(cfg.prompt_length);
    v.expect(assembled.rows() == 3 * q + 2 * 512 + g1, name + " assembled length");
    v.expect(assembled.cols() == static_cast<Eigen::Index>(cfg.projector_out),
             name + " assembled width");
    v.expect(bundle.e_local.rows() == 512 && bundle.e_global.rows() == g1,
             name + " projected shapes");
    v.note(name + " forward " + fmt(elapsed) + " s");
    if (row.variant == Variant::B) v.expect(elapsed < 5.0, "B forward took " + fmt(elapsed) + " s");
  }

  auto causal = EncoderConfig::for_variant(Variant::S);
  causal.mask_mode = encoder::MaskMode::Causal;
  const auto bank = encoder::WeightBank::generate(causal, 11);
  const Matrix tokens = oracle::random_matrix(rng, 48, causal.hidden);
  const auto base = encoder::encode(tokens, bank, causal);
  for (Eigen::Index t : {0, 1, 17, 30, 47}) {
    Matrix bumped = tokens;
    bumped.row(t) += oracle::random_matrix(rng, 1, causal.hidden);
    const auto out = encoder::encode(bumped, bank, causal);
    if (t > 0)
      v.expect((out.local.topRows(t) - base.local.topRows(t)).cwiseAbs().maxCoeff() <= 1e-9,
               "causal leak at token " + std::to_string(t));
    v.expect((out.local.row(t) - base.local.row(t)).cwiseAbs().maxCoeff() > 1e-9,
             "token " + std::to_string(t) + " ignores its own input");
  }
}

void invariance_suite(Verdict& v) {
  SplitMix64 rng(77);
  EncoderConfig toy;
  toy.variant = Variant::Custom;
  toy.layers = 2;
  toy.hidden = 32;
  toy.mlp = 48;
  toy.heads = 4;
  toy.num_image_queries = 3;
  toy.prompt_length = 4;
  toy.projector_out = 16;
  toy.point_mlp_hidden = 16;
  toy.projector_hidden1 = 24;
  toy.projector_hidden2 = 24;
  const auto bank = encoder::WeightBank::generate(toy, 77);

  const auto pts = oracle::random_points(rng, 600);
  const PointCloud cloud(pts);
  for (auto group : pc::knn_group(cloud, pc::fps(cloud, 24), 16)) {
    const auto base = encoder::point_mlp_embed(group, bank);
    for (int t = 0; t < 4; ++t) {
      for (std::size_t i = group.relative.size() - 1; i > 0; --i)
        std::swap(group.relative[i], group.relative[rng.below(i + 1)]);
      v.expect(encoder::point_mlp_embed(group, bank) == base, "max-pool permutation");
    }
  }

  const encoder::TokenizeOptions tok{24, 16, 0};
  const auto a = encoder::represent(cloud, bank, toy, tok);
  for (const Point& shift : {Point(0.25, -0.5, 1.0), Point(-3.0, 2.0, 0.125)}) {
    auto moved = pts;
    for (auto& p : moved) p += shift;
    const auto b = encoder::represent(PointCloud(moved), bank, toy, tok);
    v.expect((a.e_local - b.e_local).cwiseAbs().maxCoeff() <= 1e-9, "E_local moved");
    v.expect((a.e_ape - b.e_ape).cwiseAbs().maxCoeff() > 1e-9, "E_APE did not move");
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    corrupt::CorruptionSpec spec;
    spec.kind = corrupt::Kind::Rotate;
    spec.theta = 3.0;
    spec.seed = seed;
    const auto sub = oracle::random_points(rng, 60);
    const auto out = corrupt::rotate(PointCloud(sub), spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = 0; j < sub.size(); ++j)
        worst = std::max(worst, std::abs((out[i] - out[j]).norm() - (sub[i] - sub[j]).norm()));
    v.expect(worst <= 1e-9, "rotate changed a distance by " + fmt(worst));
  }

  for (int t = 0; t < 50; ++t) {
    const FeatureMatrix views = oracle::random_matrix(rng, 6, 10);
    const FeatureMatrix queries = oracle::random_matrix(rng, 6, 10);
    const auto base = match::cosine_cost(views, queries);
    FeatureMatrix sv = views, sq = queries;
    for (Eigen::Index r = 0; r < 6; ++r) {
      sv.row(r) *= rng.uniform(0.01, 100.0);
      sq.row(r) *= rng.uniform(0.01, 100.0);
    }
    const double diff = (match::cosine_cost(sv, sq) - base).cwiseAbs().maxCoeff();
    v.expect(diff <= 1e-12, "cosine scale changed cost by " + fmt(diff));
  }

  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(5);
    CostMatrix c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = static_cast<double>(rng.below(4));
    CostMatrix shifted = c;
    for (Eigen::Index r = 0; r < c.rows(); ++r)
      shifted.row(r).array() += static_cast<double>(rng.below(9)) - 4.0;
    const auto before = oracle::optimal_set(c, 0.0);
    const auto after = oracle::optimal_set(shifted, 0.0);
    v.expect(before == after, "oracle argmin set changed");
    const auto got = sigma_of(shifted);
    v.expect(std::find(before.begin(), before.end(), got) != before.end(),
             "shifted solution is not in the original argmin set");
    v.expect(got == sigma_of(c), "tie-break changed under a row shift");
  }
}

void corruption(Verdict& v) {
  SplitMix64 rng(5);
  const PointCloud sphere = [&] {
    std::vector<Point> pts;
    while (pts.size() < 5000) {
      Point p(rng.normal(), rng.normal(), rng.normal());
      pts.push_back(p.normalized());
    }
    return PointCloud(pts);
  }();
  for (auto kind : {corrupt::Kind::SingleView, corrupt::Kind::Jitter, corrupt::Kind::Rotate,
                    corrupt::Kind::Augment}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 31337ULL}) {
      corrupt::CorruptionSpec spec;
      spec.kind = kind;
      spec.seed = seed;
      const auto first = corrupt::apply(sphere, spec);
      const auto second = corrupt::apply(sphere, spec);
      v.expect(first == second, std::string(corrupt::kind_name(kind)) + " not bit-identical");
    }
  }

  const auto pts = oracle::random_points(rng, 100000);
  const PointCloud big(pts);
  corrupt::CorruptionSpec jit;
  jit.kind = corrupt::Kind::Jitter;
  jit.sigma = 0.02;
  jit.seed = 42;
  const auto out = corrupt::jitter(big, jit);
  double msd = 0.0;
  for (std::size_t i = 0; i < big.size(); ++i) msd += (out[i] - big[i]).squaredNorm();
  msd /= static_cast<double>(big.size());
  const double want = 3.0 * jit.sigma * jit.sigma;
  v.expect(std::abs(msd - want) <= 0.05 * want, "jitter msd " + fmt(msd) + " vs " + fmt(want));
  v.note("jitter msd/3s^2 " + fmt(msd / want));

  std::set<std::tuple<double, double, double>> input;
  for (const auto& p : sphere.points()) input.emplace(p.x(), p.y(), p.z());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    corrupt::CorruptionSpec spec;
    spec.kind = corrupt::Kind::SingleView;
    spec.seed = seed;
    const auto view = corrupt::single_view(sphere, spec);
    v.expect(view.cloud.size() == view.indices.size() && !view.indices.empty(), "view size");
    v.expect(std::is_sorted(view.indices.begin(), view.indices.end()) &&
                 std::adjacent_find(view.indices.begin(), view.indices.end()) == view.indices.end(),
             "view indices not strictly ascending");
    for (std::size_t i = 0; i < view.indices.size(); ++i) {
      v.expect(view.indices[i] < sphere.size() && view.cloud[i] == sphere[view.indices[i]],
               "view point does not match its index");
      const auto& p = view.cloud[i];
      v.expect(input.count({p.x(), p.y(), p.z()}) == 1, "view point not in the input");
    }
  }
}

void scoring(Verdict& v) {
  using eval::make_score;
  v.expect(make_score("a", {1, 1, 0, 0, 1}).s_a == 0.6, "S_a of 1,1,0,0,1");
  v.expect(make_score("a", {0.5, 1, 0.75, 0.25, 0}).s_a == 0.5, "S_a of mixed rounds");
  v.expect(make_score("a", {1, 1, 1, 1, 1}).s_a == 1.0, "S_a of all ones");

  std::istringstream fixture(
      R"({"id": "r1", "capability": "Rec", "question": "q", "ground_truth": "g"}
{"id": "r2", "capability": "Rec", "question": "q", "ground_truth": "g"}
{"id": "k1", "capability": "Know", "question": "q", "ground_truth": "g"}
{"id": "g1", "capability": "Gen", "question": "q", "ground_truth": "g"}
{"id": "s1", "capability": "Spat", "question": "q", "ground_truth": "g"}
{"id": "s2", "capability": "Spat", "question": "q", "ground_truth": "g"}
{"id": "e1", "capability": "Emb", "question": "q", "ground_truth": "g"}
)");
  const auto records = eval::ingest(fixture);
  const std::vector<eval::ScoreRecord> scores{
      make_score("r1", {1, 1, 1, 1, 1}),           make_score("r2", {0.75, 0.75, 0.25, 0.25, 0.5}),
      make_score("k1", {0.5, 0.5, 0.5, 0.5, 0.5}), make_score("g1", {0, 0, 0, 0, 0}),
      make_score("s1", {1, 0.5, 0.5, 0.25, 0.25}), make_score("s2", {0.25, 0.25, 0.25, 0.25, 0.25}),
      make_score("e1", {1, 0.75, 0.5, 0.25, 0})};
  const auto rep = eval::aggregate(scores, records, eval::RunInfo{"hand", 5, 0});
  const double want_c[] = {0.75, 0.5, 0.0, 0.375, 0.5};
  const std::size_t want_n[] = {2, 1, 1, 2, 1};
  for (std::size_t c = 0; c < 5; ++c) {
    v.expect(rep.per_capability[c].count == want_n[c], "N_c " + std::to_string(c));
    v.expect(rep.per_capability[c].score == want_c[c],
             "S_c " + std::to_string(c) + " = " + fmt(rep.per_capability[c].score.value_or(-1)));
  }
  v.expect(rep.total == 3.25 / 7.0, "S_t = " + fmt(rep.total.value_or(-1)));

  SplitMix64 rng(12);
  for (int t = 0; t < 100; ++t) {
    std::vector<eval::QARecord> recs;
    std::vector<eval::ScoreRecord> sc;
    const std::size_t n = 1 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) {
      eval::QARecord r;
      r.id = "r" + std::to_string(i);
      r.capability = static_cast<eval::Capability>(rng.below(5));
      r.question = "q";
      r.ground_truth = "g";
      recs.push_back(r);
      std::vector<double> rounds(5);
      for (auto& x : rounds) x = rng.uniform();
      sc.push_back(make_score(r.id, rounds));
    }
    const auto r = eval::aggregate(sc, recs, eval::RunInfo{});
    double weighted = 0.0;
    for (const auto& cap : r.per_capability)
      if (cap.count > 0) weighted += static_cast<double>(cap.count) * *cap.score;
    weighted /= static_cast<double>(n);
    v.expect(r.total.has_value() && std::abs(*r.total - weighted) <= 1e-12, "aggregation law");
  }

  const auto qa = eval::ingest(std::filesystem::path(SHAPEKIT_FIXTURES) / "qa_232.jsonl");
  eval::StubJudge judge;
  const auto run = eval::score_all(qa, judge, 5, 4, eval::RetryPolicy{0, {}}, 0);
  v.expect(run.unscored.empty() && run.scores.size() == qa.size(), "stub pipeline unscored");
  const auto report = eval::aggregate(run.scores, qa, eval::RunInfo{judge.id(), 5, 0});
  v.expect(report.answered == qa.size() && report.total.has_value(), "stub pipeline totals");
  const auto json = eval::emit_report(report, eval::ReportFormat::Json);
  v.expect(eval::emit_report(eval::report_from_json(json), eval::ReportFormat::Json) == json,
           "report round trip");
  v.note(std::to_string(qa.size()) + " stub-scored records");
}

std::string random_box_text(SplitMix64& rng) {
  oracle::BoxPose p;
  const double range = std::pow(10.0, rng.uniform(-2.0, 3.0));
  p.center = Eigen::Vector3d(rng.uniform(-range, range), rng.uniform(-range, range),
                             rng.uniform(-range, range));
  p.half = Eigen::Vector3d(rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)) *
           range;
  p.rot = oracle::random_rotation(rng);
  return box6d::format_box(make_box(p));
}

std::string mutate(const std::string& text, SplitMix64& rng) {
  static const std::string junk = "xyzqwXYZ#@;:{}()!?_&|~";
  std::string s = text;
  switch (rng.below(6)) {
    case 0:
      return s.substr(0, rng.below(s.size()));
    case 1: {
      const auto at = rng.below(s.size() + 1);
      return s.insert(at, 1, junk[rng.below(junk.size())]);
    }
    case 2: {
      std::vector<std::size_t> commas;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == ',') commas.push_back(i);
      return s.erase(commas[rng.below(commas.size())], 1);
    }
    case 3: {
      std::vector<std::size_t> brackets;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == '[' || s[i] == ']') brackets.push_back(i);
      return s.erase(brackets[rng.below(brackets.size())], 1);
    }
    case 4: {
      std::vector<std::size_t> commas;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == ',') commas.push_back(i);
      return s.insert(commas[rng.below(commas.size())], ",");
    }
    default: {
      const auto at = rng.below(s.size());
      s[at] = junk[rng.below(junk.size())];
      return s;
    }
  }
}

void box_fuzz(Verdict& v) {
  SplitMix64 rng(10000);
  for (int t = 0; t < 10000; ++t) {
    const std::string text = random_box_text(rng);
    try {
      const auto parsed = box6d::parse_box(text);
      v.expect(box6d::format_box(parsed) == text, "round trip changed text");
      v.expect(box6d::parse_box(box6d::format_box(parsed)).corners() == parsed.corners(),
               "round trip changed corners");
    } catch (const std::exception& e) {
      v.expect(false, std::string("valid box rejected: ") + e.what());
    }
  }
  std::size_t rejected = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::string bad = mutate(random_box_text(rng), rng);
    try {
      box6d::parse_box(bad);
      v.expect(false, "accepted: " + bad);
    } catch (const Error& e) {
      v.expect(e.code() == ErrorCode::ParseError, "wrong error code for: " + bad);
      if (e.code() == ErrorCode::ParseError) ++rejected;
    } catch (const std::exception& e) {
      v.expect(false, std::string("foreign exception: ") + e.what());
    }
  }
  v.note(std::to_string(rejected) + "/1000 malformed rejected");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Verdict&);
  };
  const Criterion criteria[] = {
      {"assignment_optimality", assignment_optimality},
      {"fps_oracle", fps_oracle},
      {"iou_analytic", iou_analytic},
      {"iou_monte_carlo", iou_monte_carlo},
      {"gradient_check", gradient_check},
      {"encoder_contracts", encoder_contracts},
      {"invariance_suite", invariance_suite},
      {"corruption_determinism_statistics", corruption},
      {"scoring_arithmetic", scoring},
      {"box_codec_fuzz", box_fuzz},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict verdict;
    const auto start = Clock::now();
    try {
      c.run(verdict);
    } catch (const std::exception& e) {
      verdict.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    std::string line = verdict.ok() ? "PASS " : "FAIL ";
    line += c.name;
    line += " (" + fmt(elapsed) + " s";
    if (!verdict.notes().empty()) line += "; " + verdict.notes();
    line += ")";
    if (!verdict.ok()) {
      line += ": " + verdict.detail();
      ++failed;
    }
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
