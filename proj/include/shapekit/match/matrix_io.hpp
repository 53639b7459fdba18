// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/match/assignment.hpp"

#include <filesystem>
#include <iosfwd>

namespace shapekit::match {

/// Whitespace-separated text, one row per line. Blank lines and lines
/// starting with '#' are skipped. Throws ParseError on a bad number or rows
/// of unequal length and EmptyInput when no row is present.
FeatureMatrix read_matrix_text(std::istream& in);

/// Reads a WB01 file holding exactly one rank-2 tensor, or else a text
/// matrix. A WB01 file with any other content throws SchemaError.
FeatureMatrix load_matrix(const std::filesystem::path& path);

}  // namespace shapekit::match
