// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace shapekit::match {

/// Rows are feature vectors.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CostMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Assignment {
  std::vector<std::size_t> sigma;  // row i is matched to column sigma[i]
  double total_cost = 0.0;         // sum of cost(i, sigma[i]) in row order
};

/// cost(i, j) = -cos(views_i, queries_j).
CostMatrix cosine_cost(const FeatureMatrix& views, const FeatureMatrix& queries);

/// Minimum-cost perfect matching on a square matrix. Among all optimal
/// permutations the lexicographically smallest sigma is returned.
Assignment hungarian(const CostMatrix& cost);

struct AlignmentLoss {
  double loss = 0.0;
  FeatureMatrix grad_queries;  // d loss / d queries, same shape as queries
};

/// Sum over i of 1 - cos(views_i, queries_sigma(i)) with its exact gradient
/// with respect to every query row.
AlignmentLoss alignment_loss(const FeatureMatrix& views, const FeatureMatrix& queries,
                             std::span<const std::size_t> sigma);

}  // namespace shapekit::match
