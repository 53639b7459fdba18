// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/shapekit.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

struct UsageFailure {
  std::string message;
};

void check(int status) {
  if (status != SK_OK) throw Failure{status, sk_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using Cloud = Handle<sk_cloud_t, sk_cloud_free>;
using Weights = Handle<sk_weights_t, sk_weights_free>;
using Bundle = Handle<sk_bundle_t, sk_bundle_free>;

struct CString {
  char* ptr = nullptr;
  ~CString() { sk_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

/// Flat keys belong to the selected subcommand unless the top-level app
/// owns them; an object value addresses a subcommand explicitly.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::string sub;
    for (const auto* s : app_->get_subcommands()) sub = s->get_name();

    std::vector<CLI::ConfigItem> items;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        const CLI::App* owner = app_->get_subcommand_no_throw(it.key());
        if (owner == nullptr) throw CLI::ConfigError("unknown config section '" + it.key() + "'");
        for (auto inner = it.value().begin(); inner != it.value().end(); ++inner) {
          if (owner->get_option_no_throw("--" + inner.key()) == nullptr)
            throw CLI::ConfigError("unknown config key '" + it.key() + "." + inner.key() + "'");
        }
        for (auto inner = it.value().begin(); inner != it.value().end(); ++inner)
          items.push_back(item({it.key()}, inner.key(), inner.value()));
        continue;
      }
      bool global = app_->get_option_no_throw("--" + it.key()) != nullptr;
      std::vector<std::string> parents;
      if (!global) {
        const CLI::App* owner = sub.empty() ? nullptr : app_->get_subcommand_no_throw(sub);
        if (owner == nullptr || owner->get_option_no_throw("--" + it.key()) == nullptr)
          throw CLI::ConfigError("unknown config key '" + it.key() + "'");
        parents.push_back(sub);
      }
      items.push_back(item(parents, it.key(), it.value()));
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays");
  }

  static CLI::ConfigItem item(std::vector<std::string> parents, std::string name,
                              const nlohmann::json& v) {
    CLI::ConfigItem out;
    out.parents = std::move(parents);
    out.name = std::move(name);
    if (v.is_array()) {
      for (const auto& e : v) out.inputs.push_back(scalar(e));
    } else {
      out.inputs.push_back(scalar(v));
    }
    return out;
  }

  const CLI::App* app_;
};

struct Global {
  std::uint64_t seed = 0;
  std::string output;
  std::string format;
};

void emit(const Global& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out || !(out << text)) throw Failure{SK_ERR_IO, "cannot write " + g.output};
}

void emit_json(const Global& g, const json& j) { emit(g, j.dump() + "\n"); }

void require_format(const Global& g, std::initializer_list<const char*> allowed) {
  if (g.format.empty()) return;
  for (const char* a : allowed)
    if (g.format == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw UsageFailure{"--format must be one of: " + list};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SK_ERR_IO, "cannot open " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json matrix_json(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < cols; ++j) row.push_back(data[i * cols + j]);
    out.push_back(std::move(row));
  }
  return out;
}

// ---- tokenize

struct TokenizeArgs {
  std::string input;
  std::size_t n_seeds = 512;
  std::size_t k = 32;
  std::size_t start = 0;
};

void run_tokenize(const Global& g, const TokenizeArgs& a) {
  require_format(g, {"json"});
  Cloud cloud;
  check(sk_cloud_load(a.input.c_str(), cloud.out()));
  std::size_t n = 0;
  check(sk_cloud_size(cloud.get(), &n));
  std::vector<std::size_t> seeds(a.n_seeds);
  check(sk_fps(cloud.get(), a.n_seeds, a.start, seeds.data()));
  std::vector<std::size_t> members(a.n_seeds * a.k);
  check(sk_knn_group(cloud.get(), seeds.data(), seeds.size(), a.k, members.data(), nullptr));

  json j;
  j["points"] = n;
  j["n_seeds"] = a.n_seeds;
  j["k"] = a.k;
  j["start_index"] = a.start;
  j["seeds"] = seeds;
  json groups = json::array();
  for (std::size_t s = 0; s < a.n_seeds; ++s)
    groups.push_back(
        std::vector<std::size_t>(members.begin() + static_cast<std::ptrdiff_t>(s * a.k),
                                 members.begin() + static_cast<std::ptrdiff_t>((s + 1) * a.k)));
  j["neighborhoods"] = std::move(groups);
  emit_json(g, j);
}

// ---- encode

struct EncodeArgs {
  std::string input;
  std::string variant = "B";
  std::string weights;
  std::string save_weights;
  std::string mask = "none";
  double mask_ratio = 0.6;
  std::size_t n_seeds = 512;
  std::size_t k = 32;
  std::size_t layers = 0, hidden = 0, mlp = 0, heads = 0;
  std::size_t prompt_length = 32;
  std::size_t image_queries = 4;
  std::size_t projector_out = 4096;
  bool no_text_query = false;
  bool raw = false;
};

void run_encode(const Global& g, const EncodeArgs& a) {
  require_format(g, {"json"});
  sk_encoder_config cfg;
  int variant = 0;
  check(sk_variant_from_name(a.variant.c_str(), &variant));
  check(sk_encoder_config_for_variant(variant, &cfg));
  if (variant == SK_VARIANT_CUSTOM) {
    if (a.layers == 0 || a.hidden == 0 || a.mlp == 0 || a.heads == 0)
      throw UsageFailure{"variant custom needs --layers, --hidden, --mlp and --heads"};
    cfg.layers = a.layers;
    cfg.hidden = a.hidden;
    cfg.mlp = a.mlp;
    cfg.heads = a.heads;
  } else if (a.layers || a.hidden || a.mlp || a.heads) {
    throw UsageFailure{"--layers/--hidden/--mlp/--heads apply to variant custom only"};
  }
  check(sk_mask_mode_from_name(a.mask.c_str(), &cfg.mask_mode));
  cfg.mask_ratio = a.mask_ratio;
  cfg.prompt_length = a.prompt_length;
  cfg.num_image_queries = a.image_queries;
  cfg.projector_out = a.projector_out;
  cfg.include_text_query = a.no_text_query ? 0 : 1;

  Cloud raw;
  check(sk_cloud_load(a.input.c_str(), raw.out()));
  Cloud normalized;
  const sk_cloud_t* cloud = raw.get();
  if (!a.raw) {
    check(sk_cloud_normalize(raw.get(), normalized.out()));
    cloud = normalized.get();
  }

  Weights weights;
  if (!a.weights.empty()) {
    check(sk_weights_load(a.weights.c_str(), weights.out()));
  } else {
    check(sk_weights_generate(&cfg, g.seed, weights.out()));
  }
  if (!a.save_weights.empty()) check(sk_weights_save(weights.get(), a.save_weights.c_str()));

  sk_encode_options opts;
  sk_encode_options_default(&opts);
  opts.n_seeds = a.n_seeds;
  opts.k = a.k;
  opts.mask_seed = g.seed;
  Bundle bundle;
  check(sk_encode(cloud, weights.get(), &cfg, &opts, bundle.out()));

  static const char* kNames[] = {"prompt_ape", "e_ape",         "prompt_local",
                                 "e_local",    "prompt_global", "e_global"};
  json segments = json::object();
  json sums = json::object();
  for (int s = 0; s < 6; ++s) {
    std::size_t rows = 0, cols = 0;
    check(sk_bundle_shape(bundle.get(), s, &rows, &cols));
    std::vector<double> data(rows * cols);
    check(sk_bundle_copy(bundle.get(), s, data.data(), data.size()));
    double sum = 0.0;
    for (double v : data) sum += v;
    segments[kNames[s]] = {rows, cols};
    sums[kNames[s]] = sum;
  }
  std::size_t rows = 0, cols = 0;
  check(sk_bundle_assemble(bundle.get(), nullptr, 0, &rows, &cols));

  json j;
  j["variant"] = a.variant;
  j["layers"] = cfg.layers;
  j["hidden"] = cfg.hidden;
  j["heads"] = cfg.heads;
  j["mask"] = a.mask;
  j["seed"] = g.seed;
  j["segments"] = std::move(segments);
  j["assembled"] = {rows, cols};
  j["checksums"] = std::move(sums);
  emit_json(g, j);
}

// ---- match

struct Matrix {
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
};

Matrix load_matrix(const std::string& path) {
  double* data = nullptr;
  Matrix m;
  check(sk_matrix_load(path.c_str(), &data, &m.rows, &m.cols));
  m.data.assign(data, data + m.rows * m.cols);
  sk_matrix_free(data);
  return m;
}

struct MatchArgs {
  std::string views;
  std::string queries;
  std::string cost;
};

void run_match(const Global& g, const MatchArgs& a) {
  require_format(g, {"json"});
  json out;
  if (!a.cost.empty()) {
    if (!a.views.empty() || !a.queries.empty())
      throw UsageFailure{"give either --cost or two feature matrices, not both"};
    auto cost = load_matrix(a.cost);
    if (cost.rows != cost.cols) throw Failure{SK_ERR_INVALID_COST, "cost matrix is not square"};
    std::vector<std::size_t> sigma(cost.rows);
    double total = 0.0;
    check(sk_hungarian(cost.data.data(), cost.rows, sigma.data(), &total));
    out["sigma"] = sigma;
    out["total_cost"] = total;
    emit_json(g, out);
    return;
  }
  if (a.views.empty() || a.queries.empty())
    throw UsageFailure{"match needs view and query matrices, or --cost"};
  auto views = load_matrix(a.views);
  auto queries = load_matrix(a.queries);
  if (views.rows != queries.rows || views.cols != queries.cols)
    throw Failure{SK_ERR_INVALID_CONFIG, "views and queries differ in shape"};
  const std::size_t n = views.rows, d = views.cols;
  std::vector<double> cost(n * n);
  check(sk_cosine_cost(views.data.data(), queries.data.data(), n, d, cost.data()));
  std::vector<std::size_t> sigma(n);
  double total = 0.0;
  check(sk_hungarian(cost.data(), n, sigma.data(), &total));
  double loss = 0.0;
  check(sk_alignment_loss(views.data.data(), queries.data.data(), n, d, sigma.data(), &loss,
                          nullptr));
  out["sigma"] = sigma;
  out["total_cost"] = total;
  out["loss"] = loss;
  out["cost"] = matrix_json(cost, n, n);
  emit_json(g, out);
}

// ---- corrupt

struct CorruptArgs {
  std::string input;
  std::string kind;
  std::optional<double> sigma, theta, fov, camera_distance, scale_min, scale_max, translate;
  std::optional<std::uint32_t> bins;
};

void run_corrupt(const Global& g, const CorruptArgs& a) {
  require_format(g, {"text", "pcb1"});
  int kind = 0;
  check(sk_corruption_kind_from_name(a.kind.c_str(), &kind));
  sk_corruption_spec spec;
  check(sk_corruption_spec_default(kind, &spec));
  spec.seed = g.seed;
  if (a.sigma) spec.sigma = *a.sigma;
  if (a.theta) spec.theta = *a.theta;
  if (a.fov) spec.fov_deg = *a.fov;
  if (a.camera_distance) spec.camera_distance = *a.camera_distance;
  if (a.bins) spec.bins = *a.bins;
  if (a.scale_min) spec.scale_min = *a.scale_min;
  if (a.scale_max) spec.scale_max = *a.scale_max;
  if (a.translate) spec.translate = *a.translate;

  Cloud cloud;
  check(sk_cloud_load(a.input.c_str(), cloud.out()));
  std::size_t n = 0;
  check(sk_cloud_size(cloud.get(), &n));
  std::vector<std::size_t> kept(n);
  std::size_t n_kept = 0;
  Cloud out;
  check(sk_corrupt(cloud.get(), &spec, out.out(), kept.data(), &n_kept));
  kept.resize(n_kept);

  int format = SK_CLOUD_TEXT;
  if (g.format == "pcb1") {
    format = SK_CLOUD_PCB1;
  } else if (g.format.empty() && !g.output.empty()) {
    auto ext = std::filesystem::path(g.output).extension().string();
    if (ext == ".pcb" || ext == ".pcb1") format = SK_CLOUD_PCB1;
  }

  if (g.output.empty()) {
    if (format == SK_CLOUD_PCB1) throw UsageFailure{"--format pcb1 needs --output"};
    std::uint8_t* data = nullptr;
    std::size_t size = 0;
    check(sk_cloud_serialize(out.get(), SK_CLOUD_TEXT, &data, &size));
    std::cout.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    sk_buffer_free(data);
    std::cout.flush();
    return;
  }
  check(sk_cloud_save(out.get(), g.output.c_str(), format));
  json j;
  j["kind"] = a.kind;
  j["seed"] = g.seed;
  j["input_points"] = n;
  j["output_points"] = n_kept;
  if (kind == SK_SINGLE_VIEW) j["kept"] = kept;
  j["output"] = g.output;
  std::cout << j.dump() << "\n";
}

// ---- iou / reg

std::vector<std::string> box_list(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return {arg};
  std::vector<std::string> out;
  std::istringstream in(read_file(arg));
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  return out;
}

void run_iou(const Global& g, const std::string& a_arg, const std::string& b_arg) {
  require_format(g, {"json"});
  auto a = box_list(a_arg);
  auto b = box_list(b_arg);
  if (a.size() != b.size())
    throw Failure{SK_ERR_INVALID_CONFIG, "box lists differ in length (" + std::to_string(a.size()) +
                                             " vs " + std::to_string(b.size()) + ")"};
  json out = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double ca[24], cb[24], v = 0.0;
    check(sk_box_parse(a[i].c_str(), ca));
    check(sk_box_parse(b[i].c_str(), cb));
    check(sk_box_iou(ca, cb, &v));
    out.push_back(v);
  }
  emit_json(g, out);
}

void run_reg(const Global& g, const std::string& pred_path, const std::string& gt_path,
             double threshold) {
  require_format(g, {"json"});
  auto pred = box_list(pred_path);
  auto gt = box_list(gt_path);
  if (pred.size() != gt.size())
    throw Failure{SK_ERR_INVALID_CONFIG, "prediction and ground-truth files differ in length"};
  std::vector<const char*> p, t;
  for (auto& s : pred) p.push_back(s.c_str());
  for (auto& s : gt) t.push_back(s.c_str());
  sk_reg_summary summary;
  std::vector<double> ious(pred.size());
  std::vector<int> hits(pred.size());
  check(
      sk_reg_accuracy(p.data(), t.data(), p.size(), threshold, &summary, ious.data(), hits.data()));
  json j;
  j["accuracy"] = summary.accuracy;
  j["hits"] = summary.hits;
  j["total"] = summary.total;
  j["unusable_predictions"] = summary.unusable_predictions;
  j["threshold"] = threshold;
  j["ious"] = ious;
  emit_json(g, j);
}

// ---- eval / report

struct EvalArgs {
  std::string input;
  std::string judge = "stub";
  unsigned rounds = 5;
  unsigned max_in_flight = 4;
  unsigned retries = 3;
  unsigned backoff_ms = 200;
  unsigned timeout_ms = 60000;
};

int report_format(const Global& g) {
  require_format(g, {"json", "markdown"});
  return g.format == "markdown" ? SK_REPORT_MARKDOWN : SK_REPORT_JSON;
}

int run_eval(const Global& g, const EvalArgs& a) {
  int format = report_format(g);
  sk_eval_options opts;
  sk_eval_options_default(&opts);
  if (a.judge == "stub") {
    opts.judge = SK_JUDGE_STUB;
  } else if (a.judge == "http") {
    opts.judge = SK_JUDGE_HTTP;
  } else {
    throw UsageFailure{"--judge must be stub or http"};
  }
  opts.k_rounds = a.rounds;
  opts.max_in_flight = a.max_in_flight;
  opts.max_retries = a.retries;
  opts.backoff_ms = a.backoff_ms;
  opts.timeout_ms = a.timeout_ms;
  opts.seed = g.seed;
  CString report, warnings;
  std::size_t unscored = 0;
  check(sk_eval_run(a.input.c_str(), &opts, format, &report.ptr, &unscored, &warnings.ptr));
  std::cerr << warnings.str();
  emit(g, report.str());
  if (unscored > 0) {
    std::cerr << "error: " << unscored << " record(s) unscored\n";
    return kExitRuntime;
  }
  return 0;
}

void run_report(const Global& g, const std::string& input) {
  int format = report_format(g);
  CString out;
  check(sk_report_render(read_file(input).c_str(), format, &out.ptr));
  emit(g, out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-cloud tokenization, encoding, matching, box and evaluation tools",
               "shapekit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", sk_version());

  Global g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->default_val(0);
  app.set_config("--config", "", "JSON file whose keys mirror the long flag names");
  app.add_option("-o,--output", g.output, "Write results to this file instead of stdout");
  app.add_option("--format", g.format, "Output format (json, markdown, text, pcb1)");

  TokenizeArgs tok;
  auto* tokenize = app.add_subcommand("tokenize", "Farthest point sampling plus kNN grouping");
  tokenize->add_option("input", tok.input, "Point cloud (text or PCB1)")->required();
  tokenize->add_option("--n-seeds", tok.n_seeds, "Number of seed points")->capture_default_str();
  tokenize->add_option("--k", tok.k, "Neighbours per seed, centroid included")
      ->capture_default_str();
  tokenize->add_option("--start", tok.start, "Index of the first seed")->capture_default_str();

  EncodeArgs enc;
  auto* encode =
      app.add_subcommand("encode", "Run the point encoder and report representation shapes");
  encode->add_option("input", enc.input, "Point cloud (text or PCB1)")->required();
  encode->add_option("--variant", enc.variant, "S, B, L or custom")->capture_default_str();
  encode->add_option("--weights", enc.weights, "WB01 weight file (default: generated from --seed)");
  encode->add_option("--save-weights", enc.save_weights, "Write the weights used to a WB01 file");
  encode->add_option("--mask", enc.mask, "none, random or causal")->capture_default_str();
  encode->add_option("--mask-ratio", enc.mask_ratio, "Hidden fraction for random masking")
      ->capture_default_str();
  encode->add_option("--n-seeds", enc.n_seeds, "Number of tokens")->capture_default_str();
  encode->add_option("--k", enc.k, "Points per token")->capture_default_str();
  encode->add_option("--layers", enc.layers, "Transformer depth (custom variant)");
  encode->add_option("--hidden", enc.hidden, "Hidden width (custom variant)");
  encode->add_option("--mlp", enc.mlp, "MLP width (custom variant)");
  encode->add_option("--heads", enc.heads, "Attention heads (custom variant)");
  encode->add_option("--prompt-length", enc.prompt_length, "Prompt rows per bank")
      ->capture_default_str();
  encode->add_option("--image-queries", enc.image_queries, "Global image queries")
      ->capture_default_str();
  encode->add_option("--projector-out", enc.projector_out, "Projector output width")
      ->capture_default_str();
  encode->add_flag("--no-text-query", enc.no_text_query, "Drop the text query row from e_global");
  encode->add_flag("--raw", enc.raw, "Skip unit-sphere normalization of the input");

  MatchArgs mat;
  auto* match = app.add_subcommand("match", "Optimal view-query assignment");
  match->add_option("views", mat.views, "View features, one row each (text or WB01)");
  match->add_option("queries", mat.queries, "Query features, one row each (text or WB01)");
  match->add_option("--cost", mat.cost, "Square cost matrix to assign directly (text or WB01)");

  CorruptArgs cor;
  auto* corrupt = app.add_subcommand("corrupt", "Apply a seeded corruption to a point cloud");
  corrupt->add_option("input", cor.input, "Point cloud (text or PCB1)")->required();
  corrupt->add_option("--kind", cor.kind, "single_view, jitter, rotate or augment")->required();
  corrupt->add_option("--sigma", cor.sigma, "Jitter standard deviation [0.01]");
  corrupt->add_option("--theta", cor.theta, "Euler angle bound in radians [pi/6]");
  corrupt->add_option("--fov", cor.fov, "Field of view in degrees [60]");
  corrupt->add_option("--camera-distance", cor.camera_distance, "Camera distance from origin [2]");
  corrupt->add_option("--bins", cor.bins, "Polar grid cells per axis [128]");
  corrupt->add_option("--scale-min", cor.scale_min, "Augment scale lower bound [2/3]");
  corrupt->add_option("--scale-max", cor.scale_max, "Augment scale upper bound [3/2]");
  corrupt->add_option("--translate", cor.translate, "Augment translation half range [0.2]");

  std::string iou_a, iou_b;
  auto* iou =
      app.add_subcommand("iou", "IoU of oriented boxes (box strings or files, one per line)");
  iou->add_option("a", iou_a, "First box or file")->required();
  iou->add_option("b", iou_b, "Second box or file")->required();

  std::string reg_pred, reg_gt;
  double reg_threshold = 0.25;
  auto* reg = app.add_subcommand("reg", "Grounding accuracy over paired box files");
  reg->add_option("--pred", reg_pred, "Predicted boxes, one per line")->required();
  reg->add_option("--gt", reg_gt, "Ground-truth boxes, one per line")->required();
  reg->add_option("--threshold", reg_threshold, "IoU needed for a hit")->capture_default_str();

  EvalArgs ev;
  auto* evalc = app.add_subcommand("eval", "Score a JSON-lines QA file with a judge");
  evalc->add_option("input", ev.input, "QA records, one JSON object per line")->required();
  evalc
      ->add_option("--judge", ev.judge, "stub or http (JUDGE_ENDPOINT, JUDGE_MODEL, JUDGE_API_KEY)")
      ->capture_default_str();
  evalc->add_option("--rounds", ev.rounds, "Judge rounds per answer")->capture_default_str();
  evalc->add_option("--max-in-flight", ev.max_in_flight, "Concurrent judge calls")
      ->capture_default_str();
  evalc->add_option("--retries", ev.retries, "Extra attempts per round")->capture_default_str();
  evalc->add_option("--backoff-ms", ev.backoff_ms, "First retry delay")->capture_default_str();
  evalc->add_option("--timeout-ms", ev.timeout_ms, "HTTP judge timeout")->capture_default_str();

  std::string report_input;
  auto* report = app.add_subcommand("report", "Re-render a JSON report");
  report->add_option("input", report_input, "Report produced by eval")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*tokenize) run_tokenize(g, tok);
    if (*encode) run_encode(g, enc);
    if (*match) run_match(g, mat);
    if (*corrupt) run_corrupt(g, cor);
    if (*iou) run_iou(g, iou_a, iou_b);
    if (*reg) run_reg(g, reg_pred, reg_gt, reg_threshold);
    if (*evalc) return run_eval(g, ev);
    if (*report) run_report(g, report_input);
  } catch (const UsageFailure& e) {
    std::cerr << "usage error: " << e.message << "\n";
    return kExitUsage;
  } catch (const Failure& e) {
    std::cerr << "error: " << sk_error_name(e.code) << ": " << e.message << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
