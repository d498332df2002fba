// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_IO_MANIFEST_HPP
#define PCUP_IO_MANIFEST_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pcup/rng.hpp"

namespace pcup::io {

struct ManifestEntry {
  std::string id;
  std::string path;  // relative to the manifest root unless absolute
  std::string category;
  std::size_t point_count = 0;
  std::map<int, std::string> rates;  // rate -> sparse sibling path

  bool operator==(const ManifestEntry&) const = default;
};

/// JSON document {"entries": [{id, path, category, point_count, rates}]}.
/// `rates` is an object keyed by the decimal rate.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::string& relative) const;
  const ManifestEntry* find(const std::string& id) const;

  /// InvalidArgument on duplicate ids, IoError on missing files.
  void validate() const;
};

std::string manifest_to_json(const DatasetManifest& manifest);

/// ParseError on malformed documents; does not touch the filesystem.
DatasetManifest manifest_from_json(const std::string& text, std::filesystem::path root);

/// Reads and validates; the root becomes the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// For each entry and rate, writes "<stem>_x<R>.ply" next to the source
/// and records it. Each (entry, rate) draws from its own stream of `seed`.
DatasetManifest build_sparse_versions(const DatasetManifest& manifest, std::span<const int> rates,
                                      RngSeed seed);

}  // namespace pcup::io

#endif  // PCUP_IO_MANIFEST_HPP
