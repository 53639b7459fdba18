// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/pc/io.hpp"

#include "shapekit/detail/numfmt.hpp"
#include "shapekit/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace shapekit::pc {

namespace {

constexpr std::array<std::uint8_t, 4> kPcbMagic{'P', 'C', 'B', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace

PointCloud read_text(std::istream& in) {
  std::vector<Point> pts;
  std::vector<Color> cols;
  std::size_t arity = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> vals;
    std::string tok;
    bool comment = false;
    while (fields >> tok) {
      if (vals.empty() && tok.front() == '#') {
        comment = true;
        break;
      }
      auto v = detail::parse_double(tok);
      if (!v || !std::isfinite(*v)) {
        fail(ErrorCode::ParseError,
             "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
      }
      vals.push_back(*v);
    }
    if (comment || vals.empty()) continue;
    if (vals.size() != 3 && vals.size() != 6) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                      ": expected 3 or 6 values, got " +
                                      std::to_string(vals.size()));
    }
    if (arity == 0) arity = vals.size();
    if (vals.size() != arity) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": mixed xyz/xyzrgb rows");
    }
    pts.emplace_back(vals[0], vals[1], vals[2]);
    if (arity == 6) cols.emplace_back(vals[3], vals[4], vals[5]);
  }
  return PointCloud(std::move(pts), std::move(cols));
}

void write_text(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    out << detail::shortest(p.x()) << ' ' << detail::shortest(p.y()) << ' '
        << detail::shortest(p.z());
    if (cloud.has_colors()) {
      const auto& c = cloud.colors()[i];
      out << ' ' << detail::shortest(c.x()) << ' ' << detail::shortest(c.y()) << ' '
          << detail::shortest(c.z());
    }
    out << '\n';
  }
}

PointCloud decode_pcb1(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 9 || !std::equal(kPcbMagic.begin(), kPcbMagic.end(), bytes.begin())) {
    fail(ErrorCode::ParseError, "PCB1: missing magic or truncated header");
  }
  const std::uint32_t count = get_u32(bytes.data() + 4);
  const std::uint8_t flag = bytes[8];
  if (flag > 1) fail(ErrorCode::ParseError, "PCB1: unknown flag " + std::to_string(flag));
  const std::size_t stride = flag == 1 ? 6 : 3;
  const std::size_t expected = 9 + std::size_t{count} * stride * 4;
  if (bytes.size() != expected) {
    fail(ErrorCode::ParseError, "PCB1: payload is " + std::to_string(bytes.size()) +
                                    " bytes, expected " + std::to_string(expected));
  }
  std::vector<Point> pts(count);
  std::vector<Color> cols(flag == 1 ? count : 0);
  const std::uint8_t* p = bytes.data() + 9;
  for (std::uint32_t i = 0; i < count; ++i) {
    pts[i] = Point(get_f32(p), get_f32(p + 4), get_f32(p + 8));
    p += 12;
    if (flag == 1) {
      cols[i] = Color(get_f32(p), get_f32(p + 4), get_f32(p + 8));
      p += 12;
    }
  }
  return PointCloud(std::move(pts), std::move(cols));
}

std::vector<std::uint8_t> encode_pcb1(const PointCloud& cloud) {
  std::vector<std::uint8_t> out(kPcbMagic.begin(), kPcbMagic.end());
  put_u32(out, static_cast<std::uint32_t>(cloud.size()));
  out.push_back(cloud.has_colors() ? 1 : 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int a = 0; a < 3; ++a) put_f32(out, cloud[i][a]);
    if (cloud.has_colors()) {
      for (int a = 0; a < 3; ++a) put_f32(out, cloud.colors()[i][a]);
    }
  }
  return out;
}

PointCloud load_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::equal(kPcbMagic.begin(), kPcbMagic.end(), bytes.begin())) {
    return decode_pcb1(bytes);
  }
  std::istringstream text(std::string(bytes.begin(), bytes.end()));
  return read_text(text);
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  if (format == CloudFormat::Pcb1) {
    auto bytes = encode_pcb1(cloud);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    write_text(out, cloud);
  }
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace shapekit::pc
