// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_TESTS_SUPPORT_HPP
#define PCUP_TESTS_SUPPORT_HPP

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "pcup/cloud.hpp"
#include "pcup/error.hpp"
#include "pcup/rng.hpp"

namespace testing {

using pcup::ColoredPointCloud;
using pcup::Vec3;

inline Vec3 random_point(pcup::Rng& rng, float lo = 0.0f, float hi = 1.0f) {
  return Vec3{float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi)), float(rng.uniform(lo, hi))};
}

inline std::vector<Vec3> random_points(std::size_t n, pcup::Rng& rng) {
  std::vector<Vec3> out(n);
  for (auto& p : out) p = random_point(rng);
  return out;
}

inline ColoredPointCloud random_cloud(std::size_t n, pcup::Rng& rng) {
  ColoredPointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(random_point(rng), random_point(rng));
  return c;
}

/// Points on a coarse lattice so that many distances tie exactly.
inline std::vector<Vec3> lattice_points(std::size_t n, pcup::Rng& rng, int side = 6) {
  std::vector<Vec3> out(n);
  for (auto& p : out) {
    p = Vec3{float(rng.below(side)), float(rng.below(side)), float(rng.below(side))};
  }
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("pcup_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename F>
pcup::Errc error_code_of(F&& f) {
  try {
    f();
  } catch (const pcup::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a pcup::Error");
}

}  // namespace testing

#endif  // PCUP_TESTS_SUPPORT_HPP
