// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/encoder/weights.hpp"

#include "shapekit/error.hpp"
#include "shapekit/rng.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>

namespace shapekit::encoder {

namespace {

using u32 = std::uint32_t;

void linear(std::vector<TensorSpec>& out, const std::string& prefix, std::size_t in,
            std::size_t outf) {
  out.push_back({prefix + ".weight", {u32(outf), u32(in)}, Init::Uniform});
  out.push_back({prefix + ".bias", {u32(outf)}, Init::Zeros});
}

void layer_norm(std::vector<TensorSpec>& out, const std::string& prefix, std::size_t width) {
  out.push_back({prefix + ".weight", {u32(width)}, Init::Ones});
  out.push_back({prefix + ".bias", {u32(width)}, Init::Zeros});
}

void put_u32(std::vector<std::uint8_t>& out, u32 v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n)
      fail(ErrorCode::ParseError, "WB01: truncated at byte " + std::to_string(pos_));
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  u32 u32le() {
    need(4);
    u32 v = 0;
    for (int i = 0; i < 4; ++i) v |= u32(b_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t Tensor::numel() const noexcept {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<TensorSpec> weight_layout(const EncoderConfig& c) {
  c.validate();
  std::vector<TensorSpec> out;
  const std::size_t h = c.hidden;

  linear(out, "point_mlp.fc1", 3, c.point_mlp_hidden);
  linear(out, "point_mlp.fc2", c.point_mlp_hidden, h);
  linear(out, "ape", 3, h);

  for (std::size_t l = 0; l < c.layers; ++l) {
    const std::string p = "blocks." + std::to_string(l);
    layer_norm(out, p + ".norm1", h);
    linear(out, p + ".attn.qkv", h, 3 * h);
    linear(out, p + ".attn.proj", h, h);
    layer_norm(out, p + ".norm2", h);
    linear(out, p + ".mlp.fc1", h, c.mlp);
    linear(out, p + ".mlp.fc2", c.mlp, h);
  }
  layer_norm(out, "norm", h);

  out.push_back({"queries", {u32(c.num_image_queries + 1), u32(h)}, Init::Normal});
  layer_norm(out, "cross.norm_q", h);
  layer_norm(out, "cross.norm_kv", h);
  linear(out, "cross.q", h, h);
  linear(out, "cross.kv", h, 2 * h);
  linear(out, "cross.proj", h, h);
  layer_norm(out, "cross.norm2", h);
  linear(out, "cross.mlp.fc1", h, c.mlp);
  linear(out, "cross.mlp.fc2", c.mlp, h);
  layer_norm(out, "cross.norm", h);

  for (const char* which : {"ape", "local", "global"}) {
    const std::string p = std::string("proj.") + which;
    linear(out, p + ".fc1", h, c.projector_hidden1);
    linear(out, p + ".fc2", c.projector_hidden1, c.projector_hidden2);
    linear(out, p + ".fc3", c.projector_hidden2, c.projector_out);
  }
  for (const char* which : {"ape", "local", "global"}) {
    out.push_back({std::string("prompt.") + which,
                   {u32(c.prompt_length), u32(c.projector_out)},
                   Init::Normal});
  }
  return out;
}

WeightBank WeightBank::generate(const EncoderConfig& config, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Tensor> tensors;
  for (auto& spec : weight_layout(config)) {
    Tensor t{std::move(spec.name), std::move(spec.shape), {}};
    t.data.resize(t.numel());
    switch (spec.init) {
      case Init::Zeros:
        break;
      case Init::Ones:
        std::fill(t.data.begin(), t.data.end(), 1.0f);
        break;
      case Init::Uniform: {
        const double bound = 1.0 / std::sqrt(static_cast<double>(t.shape.back()));
        for (auto& v : t.data) v = static_cast<float>(rng.uniform(-bound, bound));
        break;
      }
      case Init::Normal:
        for (auto& v : t.data) v = static_cast<float>(rng.normal(0.0, 0.02));
        break;
    }
    tensors.push_back(std::move(t));
  }
  return from_tensors(std::move(tensors));
}

WeightBank WeightBank::from_tensors(std::vector<Tensor> tensors) {
  WeightBank bank;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& t = tensors[i];
    if (t.data.size() != t.numel()) {
      fail(ErrorCode::InvalidConfig, "tensor '" + t.name + "' data does not match its shape");
    }
    if (!bank.index_.emplace(t.name, i).second) {
      fail(ErrorCode::InvalidConfig, "duplicate tensor '" + t.name + "'");
    }
  }
  bank.tensors_ = std::move(tensors);
  return bank;
}

bool WeightBank::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

const Tensor& WeightBank::at(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    fail(ErrorCode::InvalidConfig, "missing tensor '" + std::string(name) + "'");
  return tensors_[it->second];
}

FloatMatrixMap WeightBank::matrix(std::string_view name) const {
  const Tensor& t = at(name);
  if (t.shape.size() != 2)
    fail(ErrorCode::InvalidConfig, "tensor '" + t.name + "' is not a matrix");
  return FloatMatrixMap(t.data.data(), t.shape[0], t.shape[1]);
}

FloatVectorMap WeightBank::vector(std::string_view name) const {
  const Tensor& t = at(name);
  if (t.shape.size() != 1)
    fail(ErrorCode::InvalidConfig, "tensor '" + t.name + "' is not a vector");
  return FloatVectorMap(t.data.data(), t.shape[0]);
}

void WeightBank::check_compatible(const EncoderConfig& config) const {
  for (const auto& spec : weight_layout(config)) {
    const Tensor& t = at(spec.name);
    if (t.shape != spec.shape) {
      fail(ErrorCode::InvalidConfig,
           "tensor '" + spec.name + "' has the wrong shape for this config");
    }
  }
}

bool operator==(const WeightBank& a, const WeightBank& b) {
  if (a.tensors_.size() != b.tensors_.size()) return false;
  for (std::size_t i = 0; i < a.tensors_.size(); ++i) {
    const auto& x = a.tensors_[i];
    const auto& y = b.tensors_[i];
    if (x.name != y.name || x.shape != y.shape) return false;
    // bitwise, so NaN payloads and signed zeros count
    for (std::size_t j = 0; j < x.data.size(); ++j) {
      if (std::bit_cast<u32>(x.data[j]) != std::bit_cast<u32>(y.data[j])) return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> encode_wb01(std::span<const Tensor> tensors) {
  std::vector<std::uint8_t> out{'W', 'B', '0', '1'};
  put_u32(out, u32(tensors.size()));
  for (const auto& t : tensors) {
    if (t.name.empty() || t.name.size() > 255) {
      fail(ErrorCode::InvalidConfig, "WB01: tensor name must be 1..255 bytes");
    }
    out.push_back(static_cast<std::uint8_t>(t.name.size()));
    out.insert(out.end(), t.name.begin(), t.name.end());
    put_u32(out, u32(t.shape.size()));
    for (u32 d : t.shape) put_u32(out, d);
    for (float v : t.data) put_u32(out, std::bit_cast<u32>(v));
  }
  return out;
}

std::vector<Tensor> decode_wb01(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.bytes(4) != "WB01") fail(ErrorCode::ParseError, "WB01: bad magic");
  const u32 count = r.u32le();
  std::vector<Tensor> out;
  for (u32 i = 0; i < count; ++i) {
    Tensor t;
    t.name = r.bytes(r.u8());
    const u32 rank = r.u32le();
    r.need(std::size_t{rank} * 4);
    std::size_t n = 1;
    for (u32 k = 0; k < rank; ++k) {
      t.shape.push_back(r.u32le());
      n *= t.shape.back();
      if (n > bytes.size())
        fail(ErrorCode::ParseError, "WB01: tensor '" + t.name + "' larger than file");
    }
    r.need(n * 4);
    t.data.resize(n);
    for (auto& v : t.data) v = std::bit_cast<float>(r.u32le());
    out.push_back(std::move(t));
  }
  if (!r.done()) fail(ErrorCode::ParseError, "WB01: trailing bytes after last tensor");
  return out;
}

void save_wb01(const std::filesystem::path& path, std::span<const Tensor> tensors) {
  const auto bytes = encode_wb01(tensors);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

std::vector<Tensor> load_wb01(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wb01(bytes);
}

}  // namespace shapekit::encoder
