// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/encoder/config.hpp"

#include "shapekit/error.hpp"

#include <array>
#include <string>
#include <tuple>

namespace shapekit::encoder {

namespace {

struct Sizes {
  std::size_t layers, hidden, mlp, heads;
};

constexpr Sizes kS{12, 384, 1536, 6};
constexpr Sizes kB{12, 768, 3072, 12};
constexpr Sizes kL{24, 1024, 4096, 16};

}  // namespace

std::string_view variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::S:
      return "S";
    case Variant::B:
      return "B";
    case Variant::L:
      return "L";
    case Variant::Custom:
      return "custom";
  }
  return "unknown";
}

Variant variant_from_name(std::string_view name) {
  for (Variant v : {Variant::S, Variant::B, Variant::L, Variant::Custom}) {
    if (variant_name(v) == name) return v;
  }
  fail(ErrorCode::InvalidConfig, "unknown variant '" + std::string(name) + "'");
}

std::string_view mask_mode_name(MaskMode m) noexcept {
  switch (m) {
    case MaskMode::None:
      return "none";
    case MaskMode::Random:
      return "random";
    case MaskMode::Causal:
      return "causal";
  }
  return "unknown";
}

MaskMode mask_mode_from_name(std::string_view name) {
  for (MaskMode m : {MaskMode::None, MaskMode::Random, MaskMode::Causal}) {
    if (mask_mode_name(m) == name) return m;
  }
  fail(ErrorCode::InvalidConfig, "unknown mask mode '" + std::string(name) + "'");
}

EncoderConfig EncoderConfig::for_variant(Variant v) {
  EncoderConfig c;
  c.variant = v;
  Sizes s = kB;
  if (v == Variant::S) s = kS;
  if (v == Variant::L) s = kL;
  c.layers = s.layers;
  c.hidden = s.hidden;
  c.mlp = s.mlp;
  c.heads = s.heads;
  return c;
}

void EncoderConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidConfig, what); };
  if (variant != Variant::Custom) {
    const Sizes s = variant == Variant::S ? kS : variant == Variant::B ? kB : kL;
    if (std::tie(layers, hidden, mlp, heads) != std::tie(s.layers, s.hidden, s.mlp, s.heads)) {
      bad("variant " + std::string(variant_name(variant)) +
          " requires (layers, hidden, mlp, heads) = (" + std::to_string(s.layers) + ", " +
          std::to_string(s.hidden) + ", " + std::to_string(s.mlp) + ", " + std::to_string(s.heads) +
          ")");
    }
  }
  if (layers == 0 || hidden == 0 || mlp == 0 || heads == 0) bad("sizes must be positive");
  if (hidden % heads != 0) bad("hidden size must be divisible by the head count");
  if (projector_out == 0 || point_mlp_hidden == 0 || projector_hidden1 == 0 ||
      projector_hidden2 == 0) {
    bad("projector and point-MLP widths must be positive");
  }
  if (mask_mode == MaskMode::Random && !(mask_ratio >= 0.0 && mask_ratio < 1.0)) {
    bad("mask ratio must lie in [0, 1)");
  }
  if (global_rows() == 0) bad("e_global would be empty: no image queries and no text query");
}

}  // namespace shapekit::encoder
