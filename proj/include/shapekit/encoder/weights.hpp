// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/encoder/config.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shapekit::encoder {

struct Tensor {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;

  std::size_t numel() const noexcept;
};

enum class Init { Uniform, Zeros, Ones, Normal };

struct TensorSpec {
  std::string name;
  std::vector<std::uint32_t> shape;
  Init init;
};

/// Parameter names, shapes and initializers in generation order.
std::vector<TensorSpec> weight_layout(const EncoderConfig& config);

using FloatMatrixMap =
    Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using FloatVectorMap = Eigen::Map<const Eigen::RowVectorXf>;

/// Immutable set of named f32 parameters.
///
/// generate() walks weight_layout() in order over one SplitMix64 stream:
/// Uniform tensors draw U(-1/sqrt(fan_in), 1/sqrt(fan_in)) row-major, Normal
/// tensors draw N(0, 0.02^2); Zeros/Ones consume nothing.
class WeightBank {
 public:
  static WeightBank generate(const EncoderConfig& config, std::uint64_t seed);
  /// Throws InvalidConfig on duplicate names or data/shape mismatch.
  static WeightBank from_tensors(std::vector<Tensor> tensors);

  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }
  bool contains(std::string_view name) const;
  /// Throws InvalidConfig if absent.
  const Tensor& at(std::string_view name) const;
  FloatMatrixMap matrix(std::string_view name) const;
  FloatVectorMap vector(std::string_view name) const;

  /// Throws InvalidConfig unless every tensor of the layout is present with
  /// the expected shape.
  void check_compatible(const EncoderConfig& config) const;

  friend bool operator==(const WeightBank& a, const WeightBank& b);

 private:
  std::vector<Tensor> tensors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// WB01: "WB01" | u32 LE tensor count | per tensor: u8 name length, name
// bytes, u32 LE rank, rank x u32 LE dims, f32 LE data (row-major).
std::vector<std::uint8_t> encode_wb01(std::span<const Tensor> tensors);
std::vector<Tensor> decode_wb01(std::span<const std::uint8_t> bytes);

void save_wb01(const std::filesystem::path& path, std::span<const Tensor> tensors);
std::vector<Tensor> load_wb01(const std::filesystem::path& path);

}  // namespace shapekit::encoder
