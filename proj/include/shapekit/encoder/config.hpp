// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include <cstddef>
#include <string_view>

namespace shapekit::encoder {

/// S/B/L follow the ViT sizing table; Custom leaves the four sizes free and
/// exists for toy-scale experiments and tests.
enum class Variant { S, B, L, Custom };

enum class MaskMode { None, Random, Causal };

std::string_view variant_name(Variant v) noexcept;
Variant variant_from_name(std::string_view name);
std::string_view mask_mode_name(MaskMode m) noexcept;
MaskMode mask_mode_from_name(std::string_view name);

struct EncoderConfig {
  Variant variant = Variant::B;
  std::size_t layers = 12;
  std::size_t hidden = 768;
  std::size_t mlp = 3072;
  std::size_t heads = 12;

  MaskMode mask_mode = MaskMode::None;
  double mask_ratio = 0.6;  // fraction of tokens hidden in Random mode

  std::size_t num_image_queries = 4;  // G; one text query is always added
  bool include_text_query = true;     // keep the text query's row in e_global
  std::size_t prompt_length = 32;     // Q
  std::size_t projector_out = 4096;   // d_llm

  std::size_t point_mlp_hidden = 128;
  std::size_t projector_hidden1 = 1024;
  std::size_t projector_hidden2 = 2048;

  static EncoderConfig for_variant(Variant v);

  /// Rows of e_global: G + 1, or G when the text query is dropped.
  std::size_t global_rows() const noexcept {
    return num_image_queries + (include_text_query ? 1 : 0);
  }
  std::size_t head_dim() const noexcept { return hidden / heads; }

  /// Throws InvalidConfig.
  void validate() const;
};

}  // namespace shapekit::encoder
