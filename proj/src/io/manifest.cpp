// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/io/manifest.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "pcup/error.hpp"
#include "pcup/io/ply.hpp"
#include "pcup/sampling.hpp"

namespace pcup::io {
namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const std::string& relative) const {
  const std::filesystem::path p(relative);
  return p.is_absolute() ? p : root / p;
}

const ManifestEntry* DatasetManifest::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void DatasetManifest::validate() const {
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.id.empty()) fail(Errc::InvalidArgument, "manifest entry without id");
    if (!ids.insert(e.id).second) fail(Errc::InvalidArgument, "duplicate manifest id '" + e.id + "'");
    if (!std::filesystem::exists(resolve(e.path))) {
      fail(Errc::IoError, "manifest entry '" + e.id + "': missing " + resolve(e.path).string());
    }
    for (const auto& [rate, sibling] : e.rates) {
      if (!std::filesystem::exists(resolve(sibling))) {
        fail(Errc::IoError, "manifest entry '" + e.id + "': missing " + resolve(sibling).string());
      }
    }
  }
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["path"] = e.path;
    j["category"] = e.category;
    j["point_count"] = e.point_count;
    nlohmann::ordered_json rates = nlohmann::ordered_json::object();
    for (const auto& [rate, path] : e.rates) rates[std::to_string(rate)] = path;
    j["rates"] = rates;
    doc["entries"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text, std::filesystem::path root) {
  DatasetManifest m;
  m.root = std::move(root);
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("entries")) {
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.path = j.at("path").get<std::string>();
      e.category = j.value("category", std::string());
      e.point_count = j.value("point_count", std::size_t(0));
      if (j.contains("rates")) {
        for (const auto& [key, value] : j.at("rates").items()) {
          std::size_t used = 0;
          const int rate = std::stoi(key, &used);
          if (used != key.size() || rate < 1) fail(Errc::ParseError, "bad rate key '" + key + "'");
          e.rates[rate] = value.get<std::string>();
        }
      }
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(Errc::ParseError, std::string("manifest: ") + ex.what());
  } catch (const std::logic_error& ex) {
    fail(Errc::ParseError, std::string("manifest: ") + ex.what());
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open manifest " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  DatasetManifest m = manifest_from_json(text, path.parent_path());
  m.validate();
  return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write manifest " + path.string());
  out << manifest_to_json(manifest);
  if (!out) fail(Errc::IoError, "failed writing manifest " + path.string());
}

DatasetManifest build_sparse_versions(const DatasetManifest& manifest, std::span<const int> rates,
                                      RngSeed seed) {
  manifest.validate();
  DatasetManifest out = manifest;
  for (auto& e : out.entries) {
    const ColoredPointCloud cloud = read_ply(out.resolve(e.path));
    e.point_count = cloud.size();
    const std::filesystem::path source(e.path);
    for (int rate : rates) {
      if (rate < 1) fail(Errc::InvalidArgument, "rate must be positive");
      Rng rng = Rng::derive(seed, fnv1a(e.id) + std::uint64_t(rate));
      const ColoredPointCloud sparse = random_downsample(cloud, double(rate), rng);
      const std::filesystem::path sibling =
          source.parent_path() / (source.stem().string() + "_x" + std::to_string(rate) + ".ply");
      write_ply(sparse, out.resolve(sibling.string()));
      e.rates[rate] = sibling.generic_string();
    }
  }
  return out;
}

}  // namespace pcup::io
