// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#include "shapekit/match/matrix_io.hpp"

#include "shapekit/detail/numfmt.hpp"
#include "shapekit/encoder/weights.hpp"
#include "shapekit/error.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace shapekit::match {

FeatureMatrix read_matrix_text(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0, rows = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string token;
    std::size_t n = 0;
    while (fields >> token) {
      auto v = detail::parse_double(token);
      if (!v || !std::isfinite(*v))
        fail(ErrorCode::ParseError,
             "line " + std::to_string(line_no) + ": '" + token + "' is not a finite number");
      values.push_back(*v);
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols)
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + " has " + std::to_string(n) +
                                      " values, expected " + std::to_string(cols));
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::EmptyInput, "matrix has no rows");
  return Eigen::Map<FeatureMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(cols));
}

FeatureMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "WB01")) {
    auto tensors = encoder::decode_wb01(bytes);
    if (tensors.size() != 1 || tensors[0].shape.size() != 2)
      fail(ErrorCode::SchemaError, path.string() + " must hold exactly one rank-2 tensor");
    const auto& t = tensors[0];
    FeatureMatrix m(static_cast<Eigen::Index>(t.shape[0]), static_cast<Eigen::Index>(t.shape[1]));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = t.data[static_cast<std::size_t>(i)];
      if (!std::isfinite(m.data()[i]))
        fail(ErrorCode::ParseError, path.string() + " holds a non-finite value");
    }
    if (m.size() == 0) fail(ErrorCode::EmptyInput, path.string() + " holds an empty tensor");
    return m;
  }
  std::istringstream text(std::string(bytes.begin(), bytes.end()));
  return read_matrix_text(text);
}

}  // namespace shapekit::match
