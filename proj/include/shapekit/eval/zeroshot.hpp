// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace shapekit::eval {

using EmbeddingMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Top-k zero-shot accuracy: each shape ranks the classes by cosine
/// similarity (ties to the lower class index) and scores a hit when its
/// label is among the first k. Returns one accuracy per entry of `ks`.
std::vector<double> zeroshot_topk(const EmbeddingMatrix& shapes, const EmbeddingMatrix& classes,
                                  std::span<const std::size_t> labels,
                                  std::span<const std::size_t> ks);

}  // namespace shapekit::eval
