// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/encoder/encoder.hpp"

#include "shapekit/error.hpp"
#include "shapekit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace shapekit::encoder {

namespace {

constexpr double kLayerNormEps = 1e-6;

Matrix linear(const Matrix& x, const WeightBank& w, const std::string& prefix) {
  const Matrix weight = w.matrix(prefix + ".weight").cast<double>();
  const Eigen::RowVectorXd bias = w.vector(prefix + ".bias").cast<double>();
  if (x.cols() != weight.cols()) {
    fail(ErrorCode::InvalidConfig, prefix + ": input width " + std::to_string(x.cols()) +
                                       " != " + std::to_string(weight.cols()));
  }
  Matrix y(x.rows(), weight.rows());
  y.noalias() = x * weight.transpose();
  y.rowwise() += bias;
  return y;
}

void gelu_inplace(Matrix& x) {
  x = x.unaryExpr([](double v) { return 0.5 * v * (1.0 + std::erf(v / std::numbers::sqrt2)); });
}

Matrix layer_norm(const Matrix& x, const WeightBank& w, const std::string& prefix) {
  const Eigen::RowVectorXd gamma = w.vector(prefix + ".weight").cast<double>();
  const Eigen::RowVectorXd beta = w.vector(prefix + ".bias").cast<double>();
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    const Eigen::RowVectorXd centered = x.row(i).array() - mean;
    const double var = centered.squaredNorm() / static_cast<double>(x.cols());
    y.row(i) = (centered / std::sqrt(var + kLayerNormEps)).cwiseProduct(gamma) + beta;
  }
  return y;
}

Matrix mlp(const Matrix& x, const WeightBank& w, const std::string& prefix) {
  Matrix h = linear(x, w, prefix + ".fc1");
  gelu_inplace(h);
  return linear(h, w, prefix + ".fc2");
}

// allowed(i, j): may query i attend to key j.
using KeyMask = std::function<bool(Eigen::Index, Eigen::Index)>;

Matrix multi_head_attention(const Matrix& q, const Matrix& k, const Matrix& v, std::size_t heads,
                            const KeyMask& allowed, const AttentionObserver& observer,
                            std::string_view stage, std::size_t layer) {
  const Eigen::Index dh = q.cols() / static_cast<Eigen::Index>(heads);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix out(q.rows(), q.cols());
  for (std::size_t h = 0; h < heads; ++h) {
    const Eigen::Index off = static_cast<Eigen::Index>(h) * dh;
    Matrix scores(q.rows(), k.rows());
    scores.noalias() = q.middleCols(off, dh) * k.middleCols(off, dh).transpose();
    scores *= scale;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      double row_max = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        if (allowed && !allowed(i, j)) {
          scores(i, j) = -std::numeric_limits<double>::infinity();
        } else {
          row_max = std::max(row_max, scores(i, j));
        }
      }
      double sum = 0.0;
      for (Eigen::Index j = 0; j < scores.cols(); ++j) {
        const double e = scores(i, j) == -std::numeric_limits<double>::infinity()
                             ? 0.0
                             : std::exp(scores(i, j) - row_max);
        scores(i, j) = e;
        sum += e;
      }
      scores.row(i) /= sum;
    }
    if (observer) observer(stage, layer, h, scores);
    out.middleCols(off, dh).noalias() = scores * v.middleCols(off, dh);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> random_mask(std::size_t n, double ratio, std::uint64_t seed) {
  const auto hidden = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (hidden >= n) {
    fail(ErrorCode::InvalidConfig, "mask ratio leaves no visible token");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < hidden; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(hidden);
  std::sort(perm.begin(), perm.end());
  return perm;
}

Matrix embed_tokens(std::span<const pc::Neighborhood> groups, const WeightBank& weights) {
  const Matrix w1 = weights.matrix("point_mlp.fc1.weight").cast<double>();
  const Eigen::RowVectorXd b1 = weights.vector("point_mlp.fc1.bias").cast<double>();
  const Matrix w2 = weights.matrix("point_mlp.fc2.weight").cast<double>();
  const Eigen::RowVectorXd b2 = weights.vector("point_mlp.fc2.bias").cast<double>();
  if (w1.cols() != 3 || w2.cols() != w1.rows()) {
    fail(ErrorCode::InvalidConfig, "point MLP weights have inconsistent shapes");
  }

  Matrix tokens(static_cast<Eigen::Index>(groups.size()), w2.rows());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].relative.empty()) {
      fail(ErrorCode::EmptyInput, "neighborhood " + std::to_string(g) + " is empty");
    }
    // Offsets in lexicographic order.
    std::vector<pc::Point> rel = groups[g].relative;
    std::sort(rel.begin(), rel.end(), [](const pc::Point& a, const pc::Point& b) {
      return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    Matrix xi(static_cast<Eigen::Index>(rel.size()), 3);
    for (std::size_t j = 0; j < rel.size(); ++j) {
      xi.row(static_cast<Eigen::Index>(j)) = rel[j].transpose();
    }
    Matrix h = xi * w1.transpose();
    h.rowwise() += b1;
    gelu_inplace(h);
    Matrix feats = h * w2.transpose();
    feats.rowwise() += b2;
    tokens.row(static_cast<Eigen::Index>(g)) = feats.colwise().maxCoeff();
  }
  return tokens;
}

Eigen::RowVectorXd point_mlp_embed(const pc::Neighborhood& group, const WeightBank& weights) {
  return embed_tokens(std::span(&group, 1), weights).row(0);
}

Matrix ape(const Matrix& seed_coords, const WeightBank& weights) {
  if (seed_coords.cols() != 3) fail(ErrorCode::InvalidConfig, "seed coordinates must be N x 3");
  return project(linear(seed_coords, weights, "ape"), Projector::Ape, weights);
}

Encoded encode(const Matrix& tokens, const WeightBank& weights, const EncoderConfig& config,
               const EncodeOptions& options) {
  config.validate();
  const Eigen::Index n = tokens.rows();
  if (n < 1) fail(ErrorCode::InvalidConfig, "encode needs at least one token");
  if (tokens.cols() != static_cast<Eigen::Index>(config.hidden)) {
    fail(ErrorCode::InvalidConfig, "token width " + std::to_string(tokens.cols()) +
                                       " != hidden size " + std::to_string(config.hidden));
  }

  std::vector<char> visible(static_cast<std::size_t>(n), 1);
  KeyMask self_mask;
  KeyMask cross_mask;
  if (config.mask_mode == MaskMode::Random) {
    for (std::size_t i :
         random_mask(static_cast<std::size_t>(n), config.mask_ratio, options.mask_seed)) {
      visible[i] = 0;
    }
    self_mask = [&visible](Eigen::Index i, Eigen::Index j) {
      return i == j || visible[static_cast<std::size_t>(j)] != 0;
    };
    cross_mask = [&visible](Eigen::Index, Eigen::Index j) {
      return visible[static_cast<std::size_t>(j)] != 0;
    };
  } else if (config.mask_mode == MaskMode::Causal) {
    self_mask = [](Eigen::Index i, Eigen::Index j) { return j <= i; };
  }

  const auto hidden = static_cast<Eigen::Index>(config.hidden);
  Matrix x = tokens;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const std::string p = "blocks." + std::to_string(l);
    const Matrix qkv = linear(layer_norm(x, weights, p + ".norm1"), weights, p + ".attn.qkv");
    const Matrix attn = multi_head_attention(qkv.leftCols(hidden), qkv.middleCols(hidden, hidden),
                                             qkv.rightCols(hidden), config.heads, self_mask,
                                             options.observer, "self", l);
    x += linear(attn, weights, p + ".attn.proj");
    x += mlp(layer_norm(x, weights, p + ".norm2"), weights, p + ".mlp");
  }

  Encoded out;
  out.local = layer_norm(x, weights, "norm");

  const auto queries = weights.matrix("queries");
  if (queries.rows() != static_cast<Eigen::Index>(config.num_image_queries + 1)) {
    fail(ErrorCode::InvalidConfig,
         "query bank holds " + std::to_string(queries.rows()) +
             " rows, expected G + 1 = " + std::to_string(config.num_image_queries + 1));
  }
  Matrix g = queries.cast<double>();
  const Matrix q = linear(layer_norm(g, weights, "cross.norm_q"), weights, "cross.q");
  const Matrix kv = linear(layer_norm(out.local, weights, "cross.norm_kv"), weights, "cross.kv");
  const Matrix cross =
      multi_head_attention(q, kv.leftCols(hidden), kv.rightCols(hidden), config.heads, cross_mask,
                           options.observer, "cross", config.layers);
  g += linear(cross, weights, "cross.proj");
  g += mlp(layer_norm(g, weights, "cross.norm2"), weights, "cross.mlp");
  g = layer_norm(g, weights, "cross.norm");
  // Text query is the last row.
  out.global = g.topRows(static_cast<Eigen::Index>(config.global_rows()));
  return out;
}

std::string_view projector_name(Projector p) noexcept {
  switch (p) {
    case Projector::Ape:
      return "ape";
    case Projector::Local:
      return "local";
    case Projector::Global:
      return "global";
  }
  return "unknown";
}

Matrix project(const Matrix& features, Projector which, const WeightBank& weights) {
  const std::string p = "proj." + std::string(projector_name(which));
  Matrix h = linear(features, weights, p + ".fc1");
  gelu_inplace(h);
  h = linear(h, weights, p + ".fc2");
  gelu_inplace(h);
  return linear(h, weights, p + ".fc3");
}

RepresentationBundle represent(const pc::PointCloud& cloud, const WeightBank& weights,
                               const EncoderConfig& config, const TokenizeOptions& tokenize,
                               const EncodeOptions& options) {
  config.validate();
  const pc::SeedSet seeds = pc::fps(cloud, tokenize.n_seeds, tokenize.start_index);
  const auto groups = pc::knn_group(cloud, seeds, tokenize.k);

  Matrix seed_coords(static_cast<Eigen::Index>(seeds.indices.size()), 3);
  for (std::size_t i = 0; i < seeds.indices.size(); ++i) {
    seed_coords.row(static_cast<Eigen::Index>(i)) = cloud[seeds.indices[i]].transpose();
  }

  RepresentationBundle b;
  b.e_ape = ape(seed_coords, weights);
  const Encoded enc = encode(embed_tokens(groups, weights), weights, config, options);
  b.e_local = project(enc.local, Projector::Local, weights);
  b.e_global = project(enc.global, Projector::Global, weights);
  b.prompt_ape = weights.matrix("prompt.ape").cast<double>();
  b.prompt_local = weights.matrix("prompt.local").cast<double>();
  b.prompt_global = weights.matrix("prompt.global").cast<double>();
  return b;
}

std::string_view segment_name(SegmentKind kind) noexcept {
  switch (kind) {
    case SegmentKind::PromptApe:
      return "prompt_ape";
    case SegmentKind::Ape:
      return "e_ape";
    case SegmentKind::PromptLocal:
      return "prompt_local";
    case SegmentKind::Local:
      return "e_local";
    case SegmentKind::PromptGlobal:
      return "prompt_global";
    case SegmentKind::Global:
      return "e_global";
  }
  return "unknown";
}

std::vector<Segment> segments_of(const RepresentationBundle& b) {
  return {{SegmentKind::PromptApe, &b.prompt_ape},       {SegmentKind::Ape, &b.e_ape},
          {SegmentKind::PromptLocal, &b.prompt_local},   {SegmentKind::Local, &b.e_local},
          {SegmentKind::PromptGlobal, &b.prompt_global}, {SegmentKind::Global, &b.e_global}};
}

Matrix assemble(std::span<const Segment> segments) {
  constexpr SegmentKind kOrder[] = {SegmentKind::PromptApe,    SegmentKind::Ape,
                                    SegmentKind::PromptLocal,  SegmentKind::Local,
                                    SegmentKind::PromptGlobal, SegmentKind::Global};
  if (segments.size() != std::size(kOrder)) {
    fail(ErrorCode::InvalidConfig, "assemble expects exactly six segments");
  }
  Eigen::Index rows = 0;
  const Eigen::Index width = segments[0].rows ? segments[0].rows->cols() : 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].kind != kOrder[i]) {
      fail(ErrorCode::InvalidConfig, "segment " + std::to_string(i) + " is " +
                                         std::string(segment_name(segments[i].kind)) +
                                         ", expected " + std::string(segment_name(kOrder[i])));
    }
    if (!segments[i].rows) fail(ErrorCode::InvalidConfig, "null segment");
    if (segments[i].rows->cols() != width) {
      fail(ErrorCode::InvalidConfig, std::string(segment_name(kOrder[i])) + " width differs");
    }
    rows += segments[i].rows->rows();
  }
  const Eigen::Index q = segments[0].rows->rows();
  if (segments[2].rows->rows() != q || segments[4].rows->rows() != q) {
    fail(ErrorCode::InvalidConfig, "prompt banks differ in length");
  }
  if (segments[1].rows->rows() != segments[3].rows->rows()) {
    fail(ErrorCode::InvalidConfig, "e_ape and e_local differ in token count");
  }

  Matrix out(rows, width);
  Eigen::Index at = 0;
  for (const auto& s : segments) {
    out.middleRows(at, s.rows->rows()) = *s.rows;
    at += s.rows->rows();
  }
  return out;
}

Matrix assemble(const RepresentationBundle& bundle) {
  const auto segs = segments_of(bundle);
  return assemble(std::span<const Segment>(segs));
}

}  // namespace shapekit::encoder
