// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/encoder/config.hpp"
#include "shapekit/encoder/weights.hpp"
#include "shapekit/pc/point_cloud.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace shapekit::encoder {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Receives every attention probability matrix (rows = queries) as it is
/// produced. `stage` is "self" for encoder blocks, "cross" for the global
/// query block.
using AttentionObserver = std::function<void(std::string_view stage, std::size_t layer,
                                             std::size_t head, const Matrix& probs)>;

struct EncodeOptions {
  std::uint64_t mask_seed = 0;  // picks the hidden tokens in Random mode
  AttentionObserver observer;
};

/// x = max over members of Phi(xi), Phi = fc2(GELU(fc1(xi))). One row per
/// neighborhood.
Matrix embed_tokens(std::span<const pc::Neighborhood> groups, const WeightBank& weights);
Eigen::RowVectorXd point_mlp_embed(const pc::Neighborhood& group, const WeightBank& weights);

/// Linear 3 -> hidden on absolute seed coordinates, then the APE projector.
Matrix ape(const Matrix& seed_coords, const WeightBank& weights);

struct Encoded {
  Matrix local;   // N_s x hidden
  Matrix global;  // global_rows() x hidden
};

/// Pre-norm transformer over the tokens, then one cross-attention block in
/// which the G image queries and the text query read the token outputs.
/// Random masking hides a seeded subset of tokens from every other token
/// and from the global queries; causal masking lets token t see tokens <= t.
Encoded encode(const Matrix& tokens, const WeightBank& weights, const EncoderConfig& config,
               const EncodeOptions& options = {});

/// Returns the indices hidden in Random mode for `n` tokens.
std::vector<std::size_t> random_mask(std::size_t n, double ratio, std::uint64_t seed);

enum class Projector { Ape, Local, Global };
std::string_view projector_name(Projector p) noexcept;

/// fc1 (-> 1024), GELU, fc2 (-> 2048), GELU, fc3 (-> d_llm); each projector
/// has its own parameters.
Matrix project(const Matrix& features, Projector which, const WeightBank& weights);

struct RepresentationBundle {
  Matrix prompt_ape;     // Q x d_llm
  Matrix e_ape;          // N_s x d_llm
  Matrix prompt_local;   // Q x d_llm
  Matrix e_local;        // N_s x d_llm
  Matrix prompt_global;  // Q x d_llm
  Matrix e_global;       // global_rows() x d_llm
};

struct TokenizeOptions {
  std::size_t n_seeds = 512;
  std::size_t k = 32;
  std::size_t start_index = 0;
};

/// Tokenize (FPS + kNN), embed, encode, project, and attach prompt banks.
RepresentationBundle represent(const pc::PointCloud& cloud, const WeightBank& weights,
                               const EncoderConfig& config, const TokenizeOptions& tokenize,
                               const EncodeOptions& options = {});

enum class SegmentKind { PromptApe, Ape, PromptLocal, Local, PromptGlobal, Global };
std::string_view segment_name(SegmentKind kind) noexcept;

struct Segment {
  SegmentKind kind;
  const Matrix* rows;
};

/// Concatenates exactly [prompt_ape, e_ape, prompt_local, e_local,
/// prompt_global, e_global]. Any other order, a width mismatch or unequal
/// prompt lengths throw InvalidConfig.
Matrix assemble(std::span<const Segment> segments);
Matrix assemble(const RepresentationBundle& bundle);
std::vector<Segment> segments_of(const RepresentationBundle& bundle);

}  // namespace shapekit::encoder
