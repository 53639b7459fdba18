// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

struct ScratchDir {
  fs::path path;
  ScratchDir() : path(fs::temp_directory_path() / ("shapekit_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path scratch(const std::string& name) {
  static const ScratchDir dir;
  return dir.path / name;
}

Result run(std::initializer_list<std::string> args, const std::string& env = "") {
  std::string cmd = env + " " + quote(SHAPEKIT_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  const auto out = scratch("stdout"), err = scratch("stderr");
  cmd += " > " + quote(out.string()) + " 2> " + quote(err.string());
  int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) {
  return (fs::path(SHAPEKIT_FIXTURES) / name).string();
}

/// Compares against tests/golden/<name>; SHAPEKIT_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual) {
  const auto path = fs::path(SHAPEKIT_GOLDEN) / name;
  if (const char* u = std::getenv("SHAPEKIT_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
  }
  INFO("golden file ", name);
  REQUIRE(fs::exists(path));
  CHECK(slurp(path) == actual);
}

bool near(const json& a, const json& b, double tol) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= tol;
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!near(a[i], b[i], tol)) return false;
    return true;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !near(it.value(), b[it.key()], tol)) return false;
    return true;
  }
  return a == b;
}

/// Like check_golden, but numbers only need to agree within `tol`.
void check_golden_json(const std::string& name, const std::string& actual, double tol) {
  const auto path = fs::path(SHAPEKIT_GOLDEN) / name;
  if (const char* u = std::getenv("SHAPEKIT_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
  }
  INFO("golden file ", name);
  REQUIRE(fs::exists(path));
  CHECK(near(json::parse(slurp(path)), json::parse(actual), tol));
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

const std::string kCube = "[[0,0,0],[1,0,0],[1,1,0],[0,1,0],[0,0,1],[1,0,1],[1,1,1],[0,1,1]]";

}  // namespace

// ---- help and usage

TEST_CASE("help text") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  check_golden("help.txt", r.out);
  for (const char* sub :
       {"tokenize", "encode", "match", "corrupt", "iou", "reg", "eval", "report"}) {
    CAPTURE(sub);
    CHECK(r.out.find(sub) != std::string::npos);
    auto s = run({sub, "--help"});
    CHECK(s.code == 0);
    check_golden(std::string("help_") + sub + ".txt", s.out);
  }
}

TEST_CASE("version") {
  auto r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.1.0\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"tokenize"}).code == 2);
  CHECK(run({"tokenize", fixture("cloud_64.txt"), "--bogus"}).code == 2);
  CHECK(run({"tokenize", fixture("cloud_64.txt"), "--k", "many"}).code == 2);
  CHECK(run({"--format", "xml", "iou", kCube, kCube}).code == 2);
  CHECK(run({"corrupt", fixture("cloud_64.txt")}).code == 2);
  CHECK(run({"encode", fixture("cloud_64.txt"), "--variant", "custom"}).code == 2);
  CHECK(run({"match"}).code == 2);
  CHECK(run({"eval", fixture("qa_small.jsonl"), "--judge", "oracle"}).code == 2);
  auto r = run({"corrupt", fixture("cloud_64.txt"), "--kind", "jitter", "--format", "pcb1"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("runtime errors exit with 1 and name the error") {
  auto r = run({"tokenize", fixture("cloud_64.txt"), "--n-seeds", "65"});
  CHECK(r.code == 1);
  CHECK(r.err.find("InvalidCount") != std::string::npos);
  CHECK(r.out.empty());
  r = run({"tokenize", scratch("missing.txt").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("IoError") != std::string::npos);
  r = run({"iou", "[[0,0,0]]", kCube});
  CHECK(r.code == 1);
  CHECK(r.err.find("ParseError") != std::string::npos);
  r = run({"corrupt", fixture("cloud_64.txt"), "--kind", "melt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("InvalidConfig") != std::string::npos);
}

// ---- tokenize

TEST_CASE("tokenize") {
  auto r = run({"tokenize", fixture("cloud_64.txt"), "--n-seeds", "8", "--k", "4"});
  REQUIRE(r.code == 0);
  check_golden("tokenize.json", r.out);
  auto j = json::parse(r.out);
  CHECK(j["points"] == 64);
  CHECK(j["seeds"].size() == 8);
  CHECK(j["seeds"][0] == 0);
  REQUIRE(j["neighborhoods"].size() == 8);
  for (std::size_t s = 0; s < 8; ++s) {
    CHECK(j["neighborhoods"][s].size() == 4);
    CHECK(j["neighborhoods"][s][0] == j["seeds"][s]);
  }
  CHECK(run({"tokenize", fixture("cloud_64.txt"), "--n-seeds", "8", "--k", "4"}).out == r.out);

  auto moved =
      run({"tokenize", fixture("cloud_64.txt"), "--n-seeds", "8", "--k", "4", "--start", "21"});
  REQUIRE(moved.code == 0);
  CHECK(json::parse(moved.out)["seeds"][0] == 21);
}

TEST_CASE("tokenize with the default 512 patches") {
  std::string text;
  for (int i = 0; i < 2048; ++i) {
    double t = i * 0.61803398875;
    text += std::to_string(std::fmod(t, 1.0)) + " " + std::to_string(std::fmod(t * 7.0, 1.0)) +
            " " + std::to_string(std::fmod(t * 13.0, 1.0)) + "\n";
  }
  const auto path = scratch("dense.txt");
  write(path, text);
  auto r = run({"tokenize", "--n-seeds", "512", "--k", "32", path.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["neighborhoods"].size() == 512);
  CHECK(j["neighborhoods"][511].size() == 32);
}

// ---- encode

TEST_CASE("encode reports the representation layout") {
  const std::initializer_list<std::string> args = {"--seed",
                                                   "3",
                                                   "encode",
                                                   fixture("cloud_64.txt"),
                                                   "--variant",
                                                   "custom",
                                                   "--layers",
                                                   "2",
                                                   "--hidden",
                                                   "16",
                                                   "--mlp",
                                                   "24",
                                                   "--heads",
                                                   "4",
                                                   "--n-seeds",
                                                   "16",
                                                   "--k",
                                                   "8",
                                                   "--prompt-length",
                                                   "4",
                                                   "--image-queries",
                                                   "2",
                                                   "--projector-out",
                                                   "12"};
  auto r = run(args);
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["segments"]["prompt_ape"] == json::array({4, 12}));
  CHECK(j["segments"]["e_ape"] == json::array({16, 12}));
  CHECK(j["segments"]["e_local"] == json::array({16, 12}));
  CHECK(j["segments"]["e_global"] == json::array({3, 12}));
  CHECK(j["assembled"] == json::array({3 * 4 + 2 * 16 + 2 + 1, 12}));
  CHECK(j["seed"] == 3);
  CHECK(run(args).out == r.out);

  auto other = run({"--seed",
                    "4",
                    "encode",
                    fixture("cloud_64.txt"),
                    "--variant",
                    "custom",
                    "--layers",
                    "2",
                    "--hidden",
                    "16",
                    "--mlp",
                    "24",
                    "--heads",
                    "4",
                    "--n-seeds",
                    "16",
                    "--k",
                    "8",
                    "--prompt-length",
                    "4",
                    "--image-queries",
                    "2",
                    "--projector-out",
                    "12"});
  REQUIRE(other.code == 0);
  CHECK(json::parse(other.out)["checksums"] != j["checksums"]);

  auto no_text = run({"--seed",
                      "3",
                      "encode",
                      fixture("cloud_64.txt"),
                      "--variant",
                      "custom",
                      "--layers",
                      "2",
                      "--hidden",
                      "16",
                      "--mlp",
                      "24",
                      "--heads",
                      "4",
                      "--n-seeds",
                      "16",
                      "--k",
                      "8",
                      "--prompt-length",
                      "4",
                      "--image-queries",
                      "2",
                      "--projector-out",
                      "12",
                      "--no-text-query"});
  REQUIRE(no_text.code == 0);
  CHECK(json::parse(no_text.out)["segments"]["e_global"] == json::array({2, 12}));
}

TEST_CASE("encode with saved weights") {
  const auto w = scratch("w.wb01");
  auto first = run({"--seed",
                    "5",
                    "encode",
                    fixture("cloud_64.txt"),
                    "--variant",
                    "custom",
                    "--layers",
                    "1",
                    "--hidden",
                    "8",
                    "--mlp",
                    "8",
                    "--heads",
                    "2",
                    "--n-seeds",
                    "8",
                    "--k",
                    "4",
                    "--prompt-length",
                    "2",
                    "--image-queries",
                    "1",
                    "--projector-out",
                    "6",
                    "--save-weights",
                    w.string()});
  REQUIRE(first.code == 0);
  REQUIRE(fs::exists(w));
  CHECK(slurp(w).substr(0, 4) == "WB01");
  auto again = run({"--seed",
                    "5",
                    "encode",
                    fixture("cloud_64.txt"),
                    "--variant",
                    "custom",
                    "--layers",
                    "1",
                    "--hidden",
                    "8",
                    "--mlp",
                    "8",
                    "--heads",
                    "2",
                    "--n-seeds",
                    "8",
                    "--k",
                    "4",
                    "--prompt-length",
                    "2",
                    "--image-queries",
                    "1",
                    "--projector-out",
                    "6",
                    "--weights",
                    w.string()});
  REQUIRE(again.code == 0);
  CHECK(again.out == first.out);
  auto mismatch = run({"encode",
                       fixture("cloud_64.txt"),
                       "--variant",
                       "custom",
                       "--layers",
                       "1",
                       "--hidden",
                       "16",
                       "--mlp",
                       "8",
                       "--heads",
                       "2",
                       "--n-seeds",
                       "8",
                       "--k",
                       "4",
                       "--prompt-length",
                       "2",
                       "--image-queries",
                       "1",
                       "--projector-out",
                       "6",
                       "--weights",
                       w.string()});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("InvalidConfig") != std::string::npos);
}

// ---- match

TEST_CASE("match feature matrices") {
  auto r = run({"match", fixture("views.txt"), fixture("queries.txt")});
  REQUIRE(r.code == 0);
  check_golden_json("match.json", r.out, 1e-12);
  auto j = json::parse(r.out);
  CHECK(j["sigma"] == json::array({2, 0, 1}));
  CHECK(j["cost"].size() == 3);
}

TEST_CASE("match a cost matrix") {
  auto r = run({"match", "--cost", fixture("cost_3.txt")});
  REQUIRE(r.code == 0);
  CHECK(r.out == "{\"sigma\":[1,0,2],\"total_cost\":5.0}\n");
  CHECK(run({"match", "--cost", fixture("views.txt")}).code == 1);
  CHECK(run({"match", fixture("views.txt"), fixture("cost_3.txt")}).code == 1);
  CHECK(run({"match", fixture("views.txt")}).code == 2);
  CHECK(
      run({"match", fixture("views.txt"), fixture("queries.txt"), "--cost", fixture("cost_3.txt")})
          .code == 2);
}

// ---- corrupt

TEST_CASE("corrupt is reproducible from the seed") {
  auto a = run({"--seed", "7", "corrupt", fixture("cloud_64.txt"), "--kind", "jitter"});
  auto b = run({"corrupt", fixture("cloud_64.txt"), "--kind", "jitter", "--seed", "7"});
  auto c = run({"--seed", "8", "corrupt", fixture("cloud_64.txt"), "--kind", "jitter"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  std::istringstream lines(a.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#') ++n;
  CHECK(n == 64);

  auto none = run({"corrupt", fixture("cloud_64.txt"), "--kind", "jitter", "--sigma", "0"});
  REQUIRE(none.code == 0);
  const auto path = scratch("same.txt");
  write(path, none.out);
  auto same = run({"corrupt", path.string(), "--kind", "jitter", "--sigma", "0"});
  CHECK(same.out == none.out);
}

TEST_CASE("corrupt writes files") {
  const auto pcb = scratch("view.pcb");
  auto r = run({"--seed", "2", "-o", pcb.string(), "corrupt", fixture("cloud_64.txt"), "--kind",
                "single_view"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["input_points"] == 64);
  CHECK(j["kept"].size() == j["output_points"]);
  CHECK(slurp(pcb).substr(0, 4) == "PCB1");

  const auto txt = scratch("rot.txt");
  r = run({"-o", txt.string(), "corrupt", fixture("cloud_64.txt"), "--kind", "rotate"});
  REQUIRE(r.code == 0);
  CHECK_FALSE(json::parse(r.out).contains("kept"));
  auto text = slurp(txt);
  CHECK(text.substr(0, 4) != "PCB1");

  auto again = run({"-o", scratch("rot2.txt").string(), "corrupt", txt.string(), "--kind",
                    "augment", "--scale-min", "1", "--scale-max", "1", "--translate", "0"});
  CHECK(again.code == 0);
}

// ---- boxes

TEST_CASE("iou") {
  auto r = run({"iou", kCube, kCube});
  REQUIRE(r.code == 0);
  CHECK(r.out == "[1.0]\n");
  const auto a = scratch("a.txt"), b = scratch("b.txt");
  write(a, kCube + "\n\n" + kCube + "\n");
  write(b, kCube +
               "\n[[0.5,0,0],[1.5,0,0],[1.5,1,0],[0.5,1,0],[0.5,0,1],[1.5,0,1],[1.5,1,1],"
               "[0.5,1,1]]\n");
  r = run({"iou", a.string(), b.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0] == 1.0);
  CHECK(std::abs(j[1].get<double>() - 1.0 / 3.0) < 1e-12);
  auto mismatch = run({"iou", a.string(), kCube});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("differ in length") != std::string::npos);
}

TEST_CASE("reg") {
  auto r = run({"reg", "--pred", fixture("boxes_pred.txt"), "--gt", fixture("boxes_gt.txt")});
  REQUIRE(r.code == 0);
  check_golden_json("reg.json", r.out, 1e-12);
  auto j = json::parse(r.out);
  CHECK(j["hits"] == 2);
  CHECK(j["total"] == 4);
  CHECK(j["unusable_predictions"] == 1);
  CHECK(j["accuracy"] == 0.5);
  auto strict = run({"reg", "--pred", fixture("boxes_pred.txt"), "--gt", fixture("boxes_gt.txt"),
                     "--threshold", "0.5"});
  REQUIRE(strict.code == 0);
  CHECK(json::parse(strict.out)["hits"] == 1);
}

// ---- eval and report

TEST_CASE("eval with the stub judge") {
  auto a = run({"eval", "--judge", "stub", fixture("qa_small.jsonl")});
  auto b = run({"eval", "--judge", "stub", fixture("qa_small.jsonl")});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  check_golden("eval_small.json", a.out);
  auto md = run({"--format", "markdown", "eval", fixture("qa_small.jsonl")});
  REQUIRE(md.code == 0);
  check_golden("eval_small.md", md.out);

  const auto saved = scratch("report.json");
  auto to_file = run({"-o", saved.string(), "eval", fixture("qa_small.jsonl")});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp(saved) == a.out);
  auto rendered = run({"--format", "markdown", "report", saved.string()});
  REQUIRE(rendered.code == 0);
  CHECK(rendered.out == md.out);
  CHECK(run({"report", saved.string()}).out == a.out);
}

TEST_CASE("eval over the 232 record fixture is stable") {
  auto a = run({"eval", fixture("qa_232.jsonl"), "--max-in-flight", "8"});
  auto b = run({"eval", fixture("qa_232.jsonl"), "--max-in-flight", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["answered"] == 232);
  CHECK(j["counts"]["Rec"] == 64);
}

TEST_CASE("eval with an unreachable judge exits 1") {
  auto r = run({"eval", "--judge", "http", "--retries", "0", "--timeout-ms", "300",
                fixture("qa_small.jsonl")},
               "JUDGE_ENDPOINT=http://127.0.0.1:1/v1/chat/completions");
  CHECK(r.code == 1);
  CHECK(r.err.find("6 record(s) unscored") != std::string::npos);
  auto j = json::parse(r.out);
  CHECK(j["total"].is_null());
  CHECK(j["unscored"].size() == 6);

  auto unset = run({"eval", "--judge", "http", fixture("qa_small.jsonl")}, "env -u JUDGE_ENDPOINT");
  CHECK(unset.code == 1);
  CHECK(unset.err.find("JUDGE_ENDPOINT") != std::string::npos);
}

TEST_CASE("report input errors") {
  const auto bad = scratch("bad.json");
  write(bad, "{\"total\": 2}");
  auto r = run({"report", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("SchemaError") != std::string::npos);
}

// ---- configuration files

TEST_CASE("config files mirror long flags") {
  const auto cfg = scratch("cfg.json");
  write(cfg, R"({"n-seeds": 4, "k": 2})");
  auto r = run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["n_seeds"] == 4);
  CHECK(json::parse(r.out)["k"] == 2);

  auto overridden =
      run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt"), "--n-seeds", "6"});
  REQUIRE(overridden.code == 0);
  CHECK(json::parse(overridden.out)["n_seeds"] == 6);
  CHECK(json::parse(overridden.out)["k"] == 2);

  const auto sectioned = scratch("cfg2.json");
  write(sectioned, R"({"seed": 7, "corrupt": {"sigma": 0.02}})");
  auto c1 =
      run({"--config", sectioned.string(), "corrupt", fixture("cloud_64.txt"), "--kind", "jitter"});
  auto c2 = run(
      {"--seed", "7", "corrupt", fixture("cloud_64.txt"), "--kind", "jitter", "--sigma", "0.02"});
  REQUIRE(c1.code == 0);
  CHECK(c1.out == c2.out);
}

TEST_CASE("config files reject unknown keys") {
  const auto cfg = scratch("bad_cfg.json");
  write(cfg, R"({"n-seedz": 4})");
  CHECK(run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt")}).code == 2);
  write(cfg, R"({"tokenize": {"sigma": 1}})");
  CHECK(run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt")}).code == 2);
  write(cfg, R"({"nosuch": {"k": 1}})");
  CHECK(run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt")}).code == 2);
  write(cfg, "not json");
  CHECK(run({"--config", cfg.string(), "tokenize", fixture("cloud_64.txt")}).code == 2);
  CHECK(
      run({"--config", scratch("nope.json").string(), "tokenize", fixture("cloud_64.txt")}).code ==
      2);
}
