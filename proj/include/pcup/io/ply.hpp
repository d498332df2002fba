// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_IO_PLY_HPP
#define PCUP_IO_PLY_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pcup/cloud.hpp"

namespace pcup::io {

enum class PlyFormat { Ascii, BinaryLittleEndian };

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::UInt8;  // lists only
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyHeaderInfo {
  PlyFormat format = PlyFormat::Ascii;
  std::vector<PlyElement> elements;
  std::size_t body_offset = 0;  // bytes up to and including end_header\n

  const PlyElement* vertex() const;
  std::size_t vertex_count() const;
};

/// ParseError on malformed or big-endian headers.
PlyHeaderInfo parse_ply_header(std::string_view bytes);

/// Decodes a whole PLY file image. ParseError, MissingProperty.
ColoredPointCloud parse_ply(std::string_view bytes);

/// IoError if the file cannot be read, then as parse_ply.
ColoredPointCloud read_ply(const std::filesystem::path& path);

/// float x,y,z and uchar red,green,blue.
std::string encode_ply(const ColoredPointCloud& cloud, PlyFormat format);

void write_ply(const ColoredPointCloud& cloud, const std::filesystem::path& path,
               PlyFormat format = PlyFormat::BinaryLittleEndian);

/// [0,1] -> [0,255], round half up, clamped.
std::uint8_t quantize_channel(float a);

}  // namespace pcup::io

#endif  // PCUP_IO_PLY_HPP
