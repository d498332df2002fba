// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/io/ply.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "pcup/error.hpp"

namespace pcup::io {
namespace {

std::optional<PlyType> type_from_name(std::string_view s) {
  if (s == "char" || s == "int8") return PlyType::Int8;
  if (s == "uchar" || s == "uint8") return PlyType::UInt8;
  if (s == "short" || s == "int16") return PlyType::Int16;
  if (s == "ushort" || s == "uint16") return PlyType::UInt16;
  if (s == "int" || s == "int32") return PlyType::Int32;
  if (s == "uint" || s == "uint32") return PlyType::UInt32;
  if (s == "float" || s == "float32") return PlyType::Float32;
  if (s == "double" || s == "float64") return PlyType::Float64;
  return std::nullopt;
}

std::size_t type_size(PlyType t) {
  switch (t) {
    case PlyType::Int8:
    case PlyType::UInt8:
      return 1;
    case PlyType::Int16:
    case PlyType::UInt16:
      return 2;
    case PlyType::Int32:
    case PlyType::UInt32:
    case PlyType::Float32:
      return 4;
    case PlyType::Float64:
      return 8;
  }
  return 0;
}

bool is_integer(PlyType t) { return t != PlyType::Float32 && t != PlyType::Float64; }

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& msg) { fail(Errc::ParseError, "PLY: " + msg); }

// Sequential reader over the body.
class BinaryCursor {
 public:
  BinaryCursor(std::string_view body) : body_(body) {}

  double read(PlyType t) {
    const std::size_t n = type_size(t);
    if (n > body_.size() - pos_) parse_error("unexpected end of binary data");
    std::uint64_t raw = 0;
    for (std::size_t i = 0; i < n; ++i) {
      raw |= std::uint64_t(static_cast<unsigned char>(body_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    switch (t) {
      case PlyType::Int8:
        return double(std::int8_t(raw));
      case PlyType::UInt8:
        return double(std::uint8_t(raw));
      case PlyType::Int16:
        return double(std::int16_t(raw));
      case PlyType::UInt16:
        return double(std::uint16_t(raw));
      case PlyType::Int32:
        return double(std::int32_t(raw));
      case PlyType::UInt32:
        return double(std::uint32_t(raw));
      case PlyType::Float32:
        return double(std::bit_cast<float>(std::uint32_t(raw)));
      case PlyType::Float64:
        return std::bit_cast<double>(raw);
    }
    return 0.0;
  }

 private:
  std::string_view body_;
  std::size_t pos_ = 0;
};

class AsciiCursor {
 public:
  AsciiCursor(std::string_view body) : body_(body) {}

  double read(PlyType t) {
    while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
    if (pos_ >= body_.size()) parse_error("unexpected end of ascii data");
    std::size_t end = pos_;
    while (end < body_.size() && !std::isspace(static_cast<unsigned char>(body_[end]))) ++end;
    const std::string token(body_.substr(pos_, end - pos_));
    pos_ = end;
    char* stop = nullptr;
    const double v = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size()) parse_error("bad number '" + token + "'");
    if (is_integer(t) && v != std::floor(v)) parse_error("expected an integer, got '" + token + "'");
    return v;
  }

 private:
  std::string_view body_;
  std::size_t pos_ = 0;
};

struct VertexLayout {
  int xyz[3] = {-1, -1, -1};
  int rgb[3] = {-1, -1, -1};
  PlyType rgb_type = PlyType::UInt8;
};

VertexLayout layout_of(const PlyElement& vertex) {
  VertexLayout l;
  const char* pos_names[3] = {"x", "y", "z"};
  const char* col_names[3] = {"red", "green", "blue"};
  for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
    const PlyProperty& p = vertex.properties[i];
    if (p.is_list) continue;
    for (int c = 0; c < 3; ++c) {
      if (p.name == pos_names[c]) l.xyz[c] = int(i);
      if (p.name == col_names[c]) {
        l.rgb[c] = int(i);
        l.rgb_type = p.type;
      }
    }
  }
  for (int c = 0; c < 3; ++c) {
    if (l.xyz[c] < 0) fail(Errc::MissingProperty, std::string("PLY vertex lacks ") + pos_names[c]);
    if (l.rgb[c] < 0) fail(Errc::MissingProperty, std::string("PLY vertex lacks ") + col_names[c]);
  }
  return l;
}

float color_value(double raw, PlyType t) {
  double v = raw;
  if (t == PlyType::UInt8) v = raw / 255.0;
  else if (is_integer(t)) v = raw / 255.0;
  return float(std::clamp(v, 0.0, 1.0));
}

template <typename Cursor>
ColoredPointCloud decode_body(const PlyHeaderInfo& header, Cursor& cursor) {
  ColoredPointCloud cloud;
  for (const PlyElement& el : header.elements) {
    const bool is_vertex = el.name == "vertex";
    VertexLayout layout;
    if (is_vertex) {
      layout = layout_of(el);
      cloud.reserve(el.count);
    }
    std::vector<double> values(el.properties.size());
    for (std::size_t r = 0; r < el.count; ++r) {
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        const PlyProperty& prop = el.properties[p];
        if (prop.is_list) {
          const double n = cursor.read(prop.count_type);
          if (n < 0) parse_error("negative list length");
          for (std::size_t k = 0; k < std::size_t(n); ++k) cursor.read(prop.type);
          values[p] = 0.0;
        } else {
          values[p] = cursor.read(prop.type);
        }
      }
      if (!is_vertex) continue;
      Vec3 pos, col;
      for (int c = 0; c < 3; ++c) {
        pos[c] = float(values[layout.xyz[c]]);
        col[c] = color_value(values[layout.rgb[c]], layout.rgb_type);
      }
      if (!pos.allFinite()) parse_error("non-finite vertex coordinate");
      cloud.push_back(pos, col);
    }
    if (is_vertex) break;  // later elements (faces etc.) are not needed
  }
  return cloud;
}

std::string float_text(float v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", double(v));
  return buf;
}

}  // namespace

const PlyElement* PlyHeaderInfo::vertex() const {
  for (const auto& e : elements) {
    if (e.name == "vertex") return &e;
  }
  return nullptr;
}

std::size_t PlyHeaderInfo::vertex_count() const {
  const PlyElement* v = vertex();
  return v ? v->count : 0;
}

PlyHeaderInfo parse_ply_header(std::string_view bytes) {
  PlyHeaderInfo h;
  std::size_t pos = 0;
  bool have_format = false;
  bool first = true;
  while (true) {
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) parse_error("header is not terminated by end_header");
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (first) {
      if (line != "ply") parse_error("missing 'ply' magic");
      first = false;
      continue;
    }
    const auto tok = split(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 3) parse_error("malformed format line");
      if (tok[1] == "ascii") h.format = PlyFormat::Ascii;
      else if (tok[1] == "binary_little_endian") h.format = PlyFormat::BinaryLittleEndian;
      else if (tok[1] == "binary_big_endian") parse_error("big-endian PLY is not supported");
      else parse_error("unknown format '" + std::string(tok[1]) + "'");
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) parse_error("malformed element line");
      PlyElement e;
      e.name = std::string(tok[1]);
      std::uint64_t count = 0;
      const auto r = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), count);
      if (r.ec != std::errc() || r.ptr != tok[2].data() + tok[2].size()) {
        parse_error("bad element count '" + std::string(tok[2]) + "'");
      }
      e.count = std::size_t(count);
      h.elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (h.elements.empty()) parse_error("property before any element");
      PlyProperty p;
      if (tok.size() == 5 && tok[1] == "list") {
        const auto ct = type_from_name(tok[2]);
        const auto it = type_from_name(tok[3]);
        if (!ct || !it || !is_integer(*ct)) parse_error("bad list property types");
        p.is_list = true;
        p.count_type = *ct;
        p.type = *it;
        p.name = std::string(tok[4]);
      } else if (tok.size() == 3) {
        const auto t = type_from_name(tok[1]);
        if (!t) parse_error("unknown property type '" + std::string(tok[1]) + "'");
        p.type = *t;
        p.name = std::string(tok[2]);
      } else {
        parse_error("malformed property line");
      }
      h.elements.back().properties.push_back(std::move(p));
    } else {
      parse_error("unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_format) parse_error("missing format line");
  h.body_offset = pos;
  return h;
}

ColoredPointCloud parse_ply(std::string_view bytes) {
  const PlyHeaderInfo header = parse_ply_header(bytes);
  if (!header.vertex()) fail(Errc::MissingProperty, "PLY has no vertex element");
  const std::string_view body = bytes.substr(header.body_offset);
  if (header.format == PlyFormat::Ascii) {
    AsciiCursor c(body);
    return decode_body(header, c);
  }
  BinaryCursor c(body);
  return decode_body(header, c);
}

ColoredPointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(Errc::IoError, "failed reading " + path.string());
  return parse_ply(bytes);
}

std::uint8_t quantize_channel(float a) {
  const double v = std::floor(double(a) * 255.0 + 0.5);
  return std::uint8_t(std::clamp(v, 0.0, 255.0));
}

std::string encode_ply(const ColoredPointCloud& cloud, PlyFormat format) {
  if (cloud.attributes.size() != cloud.positions.size()) {
    fail(Errc::DimensionMismatch, "positions/attributes length differ");
  }
  std::string out = "ply\nformat ";
  out += format == PlyFormat::Ascii ? "ascii" : "binary_little_endian";
  out += " 1.0\nelement vertex " + std::to_string(cloud.size()) +
         "\nproperty float x\nproperty float y\nproperty float z\n"
         "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  if (format == PlyFormat::Ascii) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Vec3& p = cloud.positions[i];
      const Vec3& a = cloud.attributes[i];
      out += float_text(p.x()) + " " + float_text(p.y()) + " " + float_text(p.z());
      for (int c = 0; c < 3; ++c) out += " " + std::to_string(int(quantize_channel(a[c])));
      out += "\n";
    }
    return out;
  }
  out.reserve(out.size() + cloud.size() * 15);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(cloud.positions[i][c]);
      for (int b = 0; b < 4; ++b) out.push_back(char(std::uint8_t(bits >> (8 * b))));
    }
    for (int c = 0; c < 3; ++c) out.push_back(char(quantize_channel(cloud.attributes[i][c])));
  }
  return out;
}

void write_ply(const ColoredPointCloud& cloud, const std::filesystem::path& path,
               PlyFormat format) {
  const std::string bytes = encode_ply(cloud, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) fail(Errc::IoError, "failed writing " + path.string());
}

}  // namespace pcup::io
