// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/shapekit.h"

#include "shapekit/box6d/box.hpp"
#include "shapekit/corrupt/corrupt.hpp"
#include "shapekit/encoder/encoder.hpp"
#include "shapekit/error.hpp"
#include "shapekit/eval/scoring.hpp"
#include "shapekit/eval/zeroshot.hpp"
#include "shapekit/match/assignment.hpp"
#include "shapekit/match/matrix_io.hpp"
#include "shapekit/pc/io.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <numeric>
#include <sstream>
#include <string>

using namespace shapekit;

struct sk_cloud {
  pc::PointCloud cloud;
};

struct sk_weights {
  encoder::WeightBank bank;
};

struct sk_bundle {
  encoder::RepresentationBundle bundle;
};

namespace {

thread_local std::string g_last_error;

struct CallError {
  int code;
  std::string what;
};

[[noreturn]] void raise(int code, std::string what) { throw CallError{code, std::move(what)}; }

template <typename T>
void require(const T* p, const char* name) {
  if (p == nullptr) raise(SK_ERR_NULL_POINTER, std::string("argument '") + name + "' is null");
}

void require_capacity(std::size_t needed, std::size_t capacity) {
  if (capacity < needed)
    raise(SK_ERR_BUFFER_TOO_SMALL,
          "buffer holds " + std::to_string(capacity) + ", need " + std::to_string(needed));
}

template <typename F>
int guard(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return SK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const CallError& e) {
    g_last_error = e.what;
    return e.code;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SK_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SK_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return SK_ERR_UNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

pc::PointCloud make_cloud(const double* xyz, std::size_t n, const double* rgb) {
  std::vector<pc::Point> pts(n);
  std::vector<pc::Color> cols(rgb ? n : 0);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = pc::Point(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    if (rgb) cols[i] = pc::Color(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  }
  return pc::PointCloud(std::move(pts), std::move(cols));
}

match::FeatureMatrix read_matrix(const double* data, std::size_t rows, std::size_t cols) {
  return Eigen::Map<const match::FeatureMatrix>(data, static_cast<Eigen::Index>(rows),
                                                static_cast<Eigen::Index>(cols));
}

box6d::Corners read_corners(const double* c) {
  box6d::Corners out;
  for (std::size_t i = 0; i < 8; ++i) out[i] = box6d::Vec3(c[3 * i], c[3 * i + 1], c[3 * i + 2]);
  return out;
}

void write_corners(const box6d::Corners& corners, double* out) {
  for (std::size_t i = 0; i < 8; ++i)
    for (int k = 0; k < 3; ++k) out[3 * i + static_cast<std::size_t>(k)] = corners[i][k];
}

corrupt::Kind to_kind(int kind) {
  switch (kind) {
    case SK_SINGLE_VIEW:
      return corrupt::Kind::SingleView;
    case SK_JITTER:
      return corrupt::Kind::Jitter;
    case SK_ROTATE:
      return corrupt::Kind::Rotate;
    case SK_AUGMENT:
      return corrupt::Kind::Augment;
  }
  raise(SK_ERR_INVALID_CONFIG, "unknown corruption kind " + std::to_string(kind));
}

encoder::Variant to_variant(int v) {
  switch (v) {
    case SK_VARIANT_S:
      return encoder::Variant::S;
    case SK_VARIANT_B:
      return encoder::Variant::B;
    case SK_VARIANT_L:
      return encoder::Variant::L;
    case SK_VARIANT_CUSTOM:
      return encoder::Variant::Custom;
  }
  raise(SK_ERR_INVALID_CONFIG, "unknown encoder variant " + std::to_string(v));
}

encoder::MaskMode to_mask(int m) {
  switch (m) {
    case SK_MASK_NONE:
      return encoder::MaskMode::None;
    case SK_MASK_RANDOM:
      return encoder::MaskMode::Random;
    case SK_MASK_CAUSAL:
      return encoder::MaskMode::Causal;
  }
  raise(SK_ERR_INVALID_CONFIG, "unknown mask mode " + std::to_string(m));
}

encoder::EncoderConfig from_c(const sk_encoder_config& c) {
  encoder::EncoderConfig cfg;
  cfg.variant = to_variant(c.variant);
  cfg.layers = c.layers;
  cfg.hidden = c.hidden;
  cfg.mlp = c.mlp;
  cfg.heads = c.heads;
  cfg.mask_mode = to_mask(c.mask_mode);
  cfg.mask_ratio = c.mask_ratio;
  cfg.num_image_queries = c.num_image_queries;
  cfg.include_text_query = c.include_text_query != 0;
  cfg.prompt_length = c.prompt_length;
  cfg.projector_out = c.projector_out;
  cfg.point_mlp_hidden = c.point_mlp_hidden;
  cfg.projector_hidden1 = c.projector_hidden1;
  cfg.projector_hidden2 = c.projector_hidden2;
  cfg.validate();
  return cfg;
}

void to_c(const encoder::EncoderConfig& cfg, sk_encoder_config& c) {
  c.variant = static_cast<int>(cfg.variant);
  c.layers = cfg.layers;
  c.hidden = cfg.hidden;
  c.mlp = cfg.mlp;
  c.heads = cfg.heads;
  c.mask_mode = static_cast<int>(cfg.mask_mode);
  c.mask_ratio = cfg.mask_ratio;
  c.num_image_queries = cfg.num_image_queries;
  c.include_text_query = cfg.include_text_query ? 1 : 0;
  c.prompt_length = cfg.prompt_length;
  c.projector_out = cfg.projector_out;
  c.point_mlp_hidden = cfg.point_mlp_hidden;
  c.projector_hidden1 = cfg.projector_hidden1;
  c.projector_hidden2 = cfg.projector_hidden2;
}

const encoder::Matrix& segment(const encoder::RepresentationBundle& b, int seg) {
  switch (seg) {
    case SK_SEG_PROMPT_APE:
      return b.prompt_ape;
    case SK_SEG_APE:
      return b.e_ape;
    case SK_SEG_PROMPT_LOCAL:
      return b.prompt_local;
    case SK_SEG_LOCAL:
      return b.e_local;
    case SK_SEG_PROMPT_GLOBAL:
      return b.prompt_global;
    case SK_SEG_GLOBAL:
      return b.e_global;
  }
  raise(SK_ERR_INVALID_CONFIG, "unknown bundle segment " + std::to_string(seg));
}

eval::ReportFormat to_format(int format) {
  if (format == SK_REPORT_JSON) return eval::ReportFormat::Json;
  if (format == SK_REPORT_MARKDOWN) return eval::ReportFormat::Markdown;
  raise(SK_ERR_INVALID_CONFIG, "unknown report format " + std::to_string(format));
}

const char* kVersion = "0.1.0";

}  // namespace

extern "C" {

SK_API const char* sk_error_name(int code) {
  switch (code) {
    case SK_OK:
      return "Ok";
    case SK_ERR_NULL_POINTER:
      return "NullPointer";
    case SK_ERR_BUFFER_TOO_SMALL:
      return "BufferTooSmall";
    case SK_ERR_OUT_OF_MEMORY:
      return "OutOfMemory";
    case SK_ERR_UNKNOWN:
      return "Unknown";
    default:
      break;
  }
  if (code >= SK_ERR_EMPTY_INPUT && code <= SK_ERR_IO)
    return error_name(static_cast<ErrorCode>(code)).data();
  return "Unknown";
}

SK_API const char* sk_last_error(void) { return g_last_error.c_str(); }
SK_API const char* sk_version(void) { return kVersion; }
SK_API void sk_string_free(char* s) { std::free(s); }
SK_API void sk_buffer_free(uint8_t* data) { std::free(data); }

// ---- point clouds

SK_API int sk_cloud_create(const double* xyz, size_t n, const double* rgb, sk_cloud_t** out) {
  return guard([&] {
    require(out, "out");
    if (n > 0) require(xyz, "xyz");
    *out = new sk_cloud{make_cloud(xyz, n, rgb)};
  });
}

SK_API int sk_cloud_load(const char* path, sk_cloud_t** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new sk_cloud{pc::load_cloud(path)};
  });
}

SK_API int sk_cloud_save(const sk_cloud_t* cloud, const char* path, int format) {
  return guard([&] {
    require(cloud, "cloud");
    require(path, "path");
    if (format != SK_CLOUD_TEXT && format != SK_CLOUD_PCB1)
      raise(SK_ERR_INVALID_CONFIG, "unknown cloud format");
    pc::save_cloud(path, cloud->cloud,
                   format == SK_CLOUD_PCB1 ? pc::CloudFormat::Pcb1 : pc::CloudFormat::Text);
  });
}

SK_API int sk_cloud_serialize(const sk_cloud_t* cloud, int format, uint8_t** data, size_t* size) {
  return guard([&] {
    require(cloud, "cloud");
    require(data, "data");
    require(size, "size");
    std::string bytes;
    if (format == SK_CLOUD_PCB1) {
      auto b = pc::encode_pcb1(cloud->cloud);
      bytes.assign(b.begin(), b.end());
    } else if (format == SK_CLOUD_TEXT) {
      std::ostringstream os;
      pc::write_text(os, cloud->cloud);
      bytes = os.str();
    } else {
      raise(SK_ERR_INVALID_CONFIG, "unknown cloud format");
    }
    auto* buf = static_cast<uint8_t*>(std::malloc(bytes.empty() ? 1 : bytes.size()));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, bytes.data(), bytes.size());
    *data = buf;
    *size = bytes.size();
  });
}

SK_API void sk_cloud_free(sk_cloud_t* cloud) { delete cloud; }

SK_API int sk_cloud_size(const sk_cloud_t* cloud, size_t* n) {
  return guard([&] {
    require(cloud, "cloud");
    require(n, "n");
    *n = cloud->cloud.size();
  });
}

SK_API int sk_cloud_has_colors(const sk_cloud_t* cloud, int* has_colors) {
  return guard([&] {
    require(cloud, "cloud");
    require(has_colors, "has_colors");
    *has_colors = cloud->cloud.has_colors() ? 1 : 0;
  });
}

SK_API int sk_cloud_points(const sk_cloud_t* cloud, double* xyz, size_t capacity) {
  return guard([&] {
    require(cloud, "cloud");
    const auto& pts = cloud->cloud.points();
    require_capacity(3 * pts.size(), capacity);
    if (!pts.empty()) require(xyz, "xyz");
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int k = 0; k < 3; ++k) xyz[3 * i + static_cast<std::size_t>(k)] = pts[i][k];
  });
}

SK_API int sk_cloud_colors(const sk_cloud_t* cloud, double* rgb, size_t capacity) {
  return guard([&] {
    require(cloud, "cloud");
    const auto& cols = cloud->cloud.colors();
    if (cols.empty()) raise(SK_ERR_INVALID_CONFIG, "cloud has no colors");
    require_capacity(3 * cols.size(), capacity);
    require(rgb, "rgb");
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (int k = 0; k < 3; ++k) rgb[3 * i + static_cast<std::size_t>(k)] = cols[i][k];
  });
}

SK_API int sk_cloud_normalize(const sk_cloud_t* cloud, sk_cloud_t** out) {
  return guard([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = new sk_cloud{pc::normalize_unit_sphere(cloud->cloud)};
  });
}

// ---- sampling and grouping

SK_API int sk_fps(const sk_cloud_t* cloud, size_t n_seeds, size_t start_index, size_t* indices) {
  return guard([&] {
    require(cloud, "cloud");
    auto seeds = pc::fps(cloud->cloud, n_seeds, start_index);
    if (n_seeds > 0) require(indices, "indices");
    std::copy(seeds.indices.begin(), seeds.indices.end(), indices);
  });
}

SK_API int sk_knn_group(const sk_cloud_t* cloud, const size_t* seeds, size_t n_seeds, size_t k,
                        size_t* members, double* relative) {
  return guard([&] {
    require(cloud, "cloud");
    if (n_seeds > 0) {
      require(seeds, "seeds");
      require(members, "members");
    }
    pc::SeedSet set{std::vector<std::size_t>(seeds, seeds + n_seeds)};
    auto groups = pc::knn_group(cloud->cloud, set, k);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t j = 0; j < k; ++j) {
        members[g * k + j] = groups[g].member_indices[j];
        if (relative)
          for (int c = 0; c < 3; ++c)
            relative[(g * k + j) * 3 + static_cast<std::size_t>(c)] = groups[g].relative[j][c];
      }
    }
  });
}

SK_API int sk_chamfer(const sk_cloud_t* a, const sk_cloud_t* b, double* distance) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(distance, "distance");
    *distance = pc::chamfer(a->cloud, b->cloud);
  });
}

// ---- corruption

SK_API int sk_corruption_spec_default(int kind, sk_corruption_spec* spec) {
  return guard([&] {
    require(spec, "spec");
    corrupt::CorruptionSpec d;
    d.kind = to_kind(kind);
    spec->kind = kind;
    spec->sigma = d.sigma;
    spec->theta = d.theta;
    spec->fov_deg = d.fov_deg;
    spec->camera_distance = d.camera_distance;
    spec->bins = d.bins;
    spec->scale_min = d.scale_min;
    spec->scale_max = d.scale_max;
    spec->translate = d.translate;
    spec->seed = d.seed;
  });
}

SK_API int sk_corruption_kind_from_name(const char* name, int* kind) {
  return guard([&] {
    require(name, "name");
    require(kind, "kind");
    *kind = static_cast<int>(corrupt::kind_from_name(name));
  });
}

SK_API int sk_corrupt(const sk_cloud_t* cloud, const sk_corruption_spec* spec, sk_cloud_t** out,
                      size_t* kept, size_t* n_kept) {
  return guard([&] {
    require(cloud, "cloud");
    require(spec, "spec");
    require(out, "out");
    corrupt::CorruptionSpec s;
    s.kind = to_kind(spec->kind);
    s.sigma = spec->sigma;
    s.theta = spec->theta;
    s.fov_deg = spec->fov_deg;
    s.camera_distance = spec->camera_distance;
    s.bins = spec->bins;
    s.scale_min = spec->scale_min;
    s.scale_max = spec->scale_max;
    s.translate = spec->translate;
    s.seed = spec->seed;

    std::vector<std::size_t> indices;
    pc::PointCloud result;
    if (s.kind == corrupt::Kind::SingleView) {
      auto view = corrupt::single_view(cloud->cloud, s);
      result = std::move(view.cloud);
      indices = std::move(view.indices);
    } else {
      result = corrupt::apply(cloud->cloud, s);
      indices.resize(cloud->cloud.size());
      std::iota(indices.begin(), indices.end(), std::size_t{0});
    }
    if (kept) std::copy(indices.begin(), indices.end(), kept);
    if (n_kept) *n_kept = indices.size();
    *out = new sk_cloud{std::move(result)};
  });
}

// ---- matching

SK_API int sk_cosine_cost(const double* views, const double* queries, size_t n, size_t dim,
                          double* cost) {
  return guard([&] {
    require(views, "views");
    require(queries, "queries");
    require(cost, "cost");
    auto c = match::cosine_cost(read_matrix(views, n, dim), read_matrix(queries, n, dim));
    std::copy(c.data(), c.data() + c.size(), cost);
  });
}

SK_API int sk_hungarian(const double* cost, size_t n, size_t* sigma, double* total) {
  return guard([&] {
    if (n > 0) {
      require(cost, "cost");
      require(sigma, "sigma");
    }
    auto a = match::hungarian(n > 0 ? read_matrix(cost, n, n) : match::CostMatrix());
    std::copy(a.sigma.begin(), a.sigma.end(), sigma);
    if (total) *total = a.total_cost;
  });
}

SK_API int sk_alignment_loss(const double* views, const double* queries, size_t n, size_t dim,
                             const size_t* sigma, double* loss, double* grad) {
  return guard([&] {
    require(views, "views");
    require(queries, "queries");
    require(sigma, "sigma");
    require(loss, "loss");
    auto r = match::alignment_loss(read_matrix(views, n, dim), read_matrix(queries, n, dim),
                                   std::span<const std::size_t>(sigma, n));
    *loss = r.loss;
    if (grad) std::copy(r.grad_queries.data(), r.grad_queries.data() + r.grad_queries.size(), grad);
  });
}

SK_API int sk_matrix_load(const char* path, double** data, size_t* rows, size_t* cols) {
  return guard([&] {
    require(path, "path");
    require(data, "data");
    require(rows, "rows");
    require(cols, "cols");
    auto m = match::load_matrix(path);
    auto* buf =
        static_cast<double*>(std::malloc(static_cast<std::size_t>(m.size()) * sizeof(double)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(m.data(), m.data() + m.size(), buf);
    *data = buf;
    *rows = static_cast<std::size_t>(m.rows());
    *cols = static_cast<std::size_t>(m.cols());
  });
}

SK_API void sk_matrix_free(double* data) { std::free(data); }

// ---- oriented boxes

SK_API int sk_box_parse(const char* text, double* corners) {
  return guard([&] {
    require(text, "text");
    require(corners, "corners");
    write_corners(box6d::parse_box(text).corners(), corners);
  });
}

SK_API int sk_box_format(const double* corners, char** text) {
  return guard([&] {
    require(corners, "corners");
    require(text, "text");
    auto box = box6d::OrientedBox::from_corners(read_corners(corners));
    *text = dup_string(box6d::format_box(box));
  });
}

SK_API int sk_box_from_pose(const double* center, const double* half_extents,
                            const double* rotation, double* corners) {
  return guard([&] {
    require(center, "center");
    require(half_extents, "half_extents");
    require(rotation, "rotation");
    require(corners, "corners");
    box6d::Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = rotation[3 * i + j];
    auto box =
        box6d::corners_from_pose(box6d::Vec3(center[0], center[1], center[2]),
                                 box6d::Vec3(half_extents[0], half_extents[1], half_extents[2]), r);
    write_corners(box.corners(), corners);
  });
}

SK_API int sk_box_fit_pose(const double* corners, double* center, double* half_extents,
                           double* rotation) {
  return guard([&] {
    require(corners, "corners");
    require(center, "center");
    require(half_extents, "half_extents");
    require(rotation, "rotation");
    auto pose = box6d::fit_pose_from_corners(read_corners(corners));
    for (int k = 0; k < 3; ++k) {
      center[k] = pose.center[k];
      half_extents[k] = pose.half_extents[k];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rotation[3 * i + j] = pose.rotation(i, j);
  });
}

SK_API int sk_box_iou(const double* a, const double* b, double* iou) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(iou, "iou");
    *iou = box6d::iou(box6d::OrientedBox::from_corners(read_corners(a)),
                      box6d::OrientedBox::from_corners(read_corners(b)));
  });
}

SK_API int sk_reg_accuracy(const char* const* predictions, const char* const* ground_truth,
                           size_t n, double threshold, sk_reg_summary* summary, double* ious,
                           int* hits) {
  return guard([&] {
    require(summary, "summary");
    if (n > 0) {
      require(predictions, "predictions");
      require(ground_truth, "ground_truth");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      require(predictions[i], "predictions[i]");
      require(ground_truth[i], "ground_truth[i]");
      pairs.emplace_back(predictions[i], ground_truth[i]);
    }
    auto report = box6d::reg_accuracy(pairs, threshold);
    summary->accuracy = report.accuracy;
    summary->hits = report.hits;
    summary->total = report.total;
    summary->unusable_predictions = report.unusable_predictions;
    for (std::size_t i = 0; i < report.results.size(); ++i) {
      if (ious) ious[i] = report.results[i].iou;
      if (hits) hits[i] = report.results[i].hit ? 1 : 0;
    }
  });
}

// ---- encoder

SK_API int sk_encoder_config_for_variant(int variant, sk_encoder_config* config) {
  return guard([&] {
    require(config, "config");
    to_c(encoder::EncoderConfig::for_variant(to_variant(variant)), *config);
  });
}

SK_API int sk_variant_from_name(const char* name, int* variant) {
  return guard([&] {
    require(name, "name");
    require(variant, "variant");
    *variant = static_cast<int>(encoder::variant_from_name(name));
  });
}

SK_API int sk_mask_mode_from_name(const char* name, int* mode) {
  return guard([&] {
    require(name, "name");
    require(mode, "mode");
    *mode = static_cast<int>(encoder::mask_mode_from_name(name));
  });
}

SK_API int sk_weights_generate(const sk_encoder_config* config, uint64_t seed, sk_weights_t** out) {
  return guard([&] {
    require(config, "config");
    require(out, "out");
    *out = new sk_weights{encoder::WeightBank::generate(from_c(*config), seed)};
  });
}

SK_API int sk_weights_load(const char* path, sk_weights_t** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new sk_weights{encoder::WeightBank::from_tensors(encoder::load_wb01(path))};
  });
}

SK_API int sk_weights_save(const sk_weights_t* weights, const char* path) {
  return guard([&] {
    require(weights, "weights");
    require(path, "path");
    encoder::save_wb01(path, weights->bank.tensors());
  });
}

SK_API void sk_weights_free(sk_weights_t* weights) { delete weights; }

SK_API void sk_encode_options_default(sk_encode_options* options) {
  if (options == nullptr) return;
  encoder::TokenizeOptions t;
  options->n_seeds = t.n_seeds;
  options->k = t.k;
  options->start_index = t.start_index;
  options->mask_seed = encoder::EncodeOptions{}.mask_seed;
}

SK_API int sk_encode(const sk_cloud_t* cloud, const sk_weights_t* weights,
                     const sk_encoder_config* config, const sk_encode_options* options,
                     sk_bundle_t** out) {
  return guard([&] {
    require(cloud, "cloud");
    require(weights, "weights");
    require(config, "config");
    require(out, "out");
    sk_encode_options opts;
    sk_encode_options_default(&opts);
    if (options) opts = *options;
    encoder::TokenizeOptions tok{opts.n_seeds, opts.k, opts.start_index};
    encoder::EncodeOptions enc;
    enc.mask_seed = opts.mask_seed;
    *out =
        new sk_bundle{encoder::represent(cloud->cloud, weights->bank, from_c(*config), tok, enc)};
  });
}

SK_API void sk_bundle_free(sk_bundle_t* bundle) { delete bundle; }

SK_API int sk_bundle_shape(const sk_bundle_t* bundle, int seg, size_t* rows, size_t* cols) {
  return guard([&] {
    require(bundle, "bundle");
    require(rows, "rows");
    require(cols, "cols");
    const auto& m = segment(bundle->bundle, seg);
    *rows = static_cast<std::size_t>(m.rows());
    *cols = static_cast<std::size_t>(m.cols());
  });
}

SK_API int sk_bundle_copy(const sk_bundle_t* bundle, int seg, double* out, size_t capacity) {
  return guard([&] {
    require(bundle, "bundle");
    const auto& m = segment(bundle->bundle, seg);
    require_capacity(static_cast<std::size_t>(m.size()), capacity);
    if (m.size() > 0) require(out, "out");
    std::copy(m.data(), m.data() + m.size(), out);
  });
}

SK_API int sk_bundle_assemble(const sk_bundle_t* bundle, double* out, size_t capacity, size_t* rows,
                              size_t* cols) {
  return guard([&] {
    require(bundle, "bundle");
    auto m = encoder::assemble(bundle->bundle);
    if (rows) *rows = static_cast<std::size_t>(m.rows());
    if (cols) *cols = static_cast<std::size_t>(m.cols());
    if (out == nullptr) return;
    require_capacity(static_cast<std::size_t>(m.size()), capacity);
    std::copy(m.data(), m.data() + m.size(), out);
  });
}

// ---- evaluation

SK_API void sk_eval_options_default(sk_eval_options* options) {
  if (options == nullptr) return;
  eval::RetryPolicy retry;
  options->judge = SK_JUDGE_STUB;
  options->k_rounds = eval::kDefaultRounds;
  options->max_in_flight = 4;
  options->max_retries = retry.max_retries;
  options->backoff_ms = static_cast<unsigned>(retry.backoff.count());
  options->seed = 0;
  options->endpoint = nullptr;
  options->model = nullptr;
  options->api_key = nullptr;
  options->timeout_ms = 60000;
}

SK_API int sk_eval_run(const char* path, const sk_eval_options* options, int format, char** report,
                       size_t* n_unscored, char** warnings) {
  return guard([&] {
    require(path, "path");
    require(report, "report");
    sk_eval_options opts;
    sk_eval_options_default(&opts);
    if (options) opts = *options;
    auto fmt = to_format(format);

    std::unique_ptr<eval::Judge> judge;
    if (opts.judge == SK_JUDGE_STUB) {
      judge = std::make_unique<eval::StubJudge>();
    } else if (opts.judge == SK_JUDGE_HTTP) {
      eval::HttpJudgeConfig cfg;
      if (opts.endpoint) {
        cfg.endpoint = opts.endpoint;
      } else {
        cfg = eval::HttpJudgeConfig::from_env();
      }
      if (opts.model) cfg.model = opts.model;
      if (opts.api_key) cfg.api_key = opts.api_key;
      cfg.timeout = std::chrono::milliseconds(opts.timeout_ms);
      judge = std::make_unique<eval::HttpJudge>(std::move(cfg));
    } else {
      raise(SK_ERR_INVALID_CONFIG, "unknown judge " + std::to_string(opts.judge));
    }

    auto records = eval::ingest(std::filesystem::path(path));
    eval::RetryPolicy retry{opts.max_retries, std::chrono::milliseconds(opts.backoff_ms)};
    auto run =
        eval::score_all(records, *judge, opts.k_rounds, opts.max_in_flight, retry, opts.seed);
    auto rep = eval::aggregate(run.scores, records, {judge->id(), opts.k_rounds, opts.seed});

    std::string warn;
    for (const auto& w : run.warnings) warn += w + "\n";
    auto text = eval::emit_report(rep, fmt);
    char* warn_out = warnings ? dup_string(warn) : nullptr;
    *report = dup_string(text);
    if (warnings) *warnings = warn_out;
    if (n_unscored) *n_unscored = run.unscored.size();
  });
}

SK_API int sk_report_render(const char* report_json, int format, char** out) {
  return guard([&] {
    require(report_json, "report_json");
    require(out, "out");
    *out = dup_string(eval::emit_report(eval::report_from_json(report_json), to_format(format)));
  });
}

SK_API int sk_zeroshot_topk(const double* shapes, size_t n_shapes, const double* classes,
                            size_t n_classes, size_t dim, const size_t* labels, const size_t* ks,
                            size_t n_ks, double* accuracy) {
  return guard([&] {
    if (n_shapes > 0) {
      require(shapes, "shapes");
      require(labels, "labels");
    }
    if (n_classes > 0) require(classes, "classes");
    if (n_ks > 0) {
      require(ks, "ks");
      require(accuracy, "accuracy");
    }
    auto acc = eval::zeroshot_topk(
        read_matrix(shapes, n_shapes, dim), read_matrix(classes, n_classes, dim),
        std::span<const std::size_t>(labels, n_shapes), std::span<const std::size_t>(ks, n_ks));
    std::copy(acc.begin(), acc.end(), accuracy);
  });
}

}  // extern "C"
