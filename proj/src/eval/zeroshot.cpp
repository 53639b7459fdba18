// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/eval/zeroshot.hpp"

#include "shapekit/error.hpp"

#include <cmath>
#include <string>

namespace shapekit::eval {

namespace {

EmbeddingMatrix unit_rows(const EmbeddingMatrix& m, const char* what) {
  EmbeddingMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double n = m.row(i).norm();
    if (!std::isfinite(n) || n == 0.0)
      fail(ErrorCode::DegenerateFeature,
           std::string(what) + " row " + std::to_string(i) + " has zero or non-finite norm");
    out.row(i) = m.row(i) / n;
  }
  return out;
}

}  // namespace

std::vector<double> zeroshot_topk(const EmbeddingMatrix& shapes, const EmbeddingMatrix& classes,
                                  std::span<const std::size_t> labels,
                                  std::span<const std::size_t> ks) {
  if (shapes.rows() == 0 || classes.rows() == 0)
    fail(ErrorCode::EmptyInput, "zero-shot evaluation needs shapes and classes");
  if (shapes.cols() != classes.cols())
    fail(ErrorCode::InvalidConfig, "shape and class embeddings differ in width");
  if (labels.size() != static_cast<std::size_t>(shapes.rows()))
    fail(ErrorCode::InvalidConfig, "one label per shape is required");
  auto n_classes = static_cast<std::size_t>(classes.rows());
  for (auto l : labels)
    if (l >= n_classes) fail(ErrorCode::InvalidConfig, "label out of range");
  for (auto k : ks)
    if (k == 0) fail(ErrorCode::InvalidCount, "k must be positive");

  EmbeddingMatrix sim = unit_rows(shapes, "shape") * unit_rows(classes, "class").transpose();
  std::vector<std::size_t> hits(ks.size(), 0);
  for (Eigen::Index i = 0; i < sim.rows(); ++i) {
    auto label = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    double target = sim(i, label);
    std::size_t rank = 0;
    for (Eigen::Index c = 0; c < sim.cols(); ++c) {
      double s = sim(i, c);
      if (s > target || (s == target && c < label)) ++rank;
    }
    for (std::size_t q = 0; q < ks.size(); ++q)
      if (rank < ks[q]) ++hits[q];
  }
  std::vector<double> out;
  out.reserve(ks.size());
  for (auto h : hits) out.push_back(static_cast<double>(h) / static_cast<double>(shapes.rows()));
  return out;
}

}  // namespace shapekit::eval
