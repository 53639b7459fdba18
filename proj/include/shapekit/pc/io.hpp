// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 shapekit contributors
#pragma once

#include "shapekit/pc/point_cloud.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace shapekit::pc {

// Text: one point per line, "x y z" or "x y z r g b". Blank lines and lines
// starting with '#' are ignored; every data line must have the same arity.
//
// PCB1: "PCB1" | u32 LE count | u8 flag (0 xyz, 1 xyzrgb) | f32 LE row-major.

enum class CloudFormat { Text, Pcb1 };

PointCloud read_text(std::istream& in);
void write_text(std::ostream& out, const PointCloud& cloud);

PointCloud decode_pcb1(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pcb1(const PointCloud& cloud);

/// Sniffs the PCB1 magic; anything else is parsed as text.
PointCloud load_cloud(const std::filesystem::path& path);
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format);

}  // namespace shapekit::pc
