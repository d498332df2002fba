// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PCUP_NN_CHECKPOINT_HPP
#define PCUP_NN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pcup/nn/networks.hpp"
#include "pcup/nn/parameters.hpp"

namespace pcup::nn {

struct Checkpoint {
  ModelSpec spec;
  ParameterStore params;
};

// Layout (all integers 64-bit little-endian unless noted):
//   "PCUPv1", u32 network id,
//   k1, k2, feature_width, rdb_layers, rdb_growth, patch_size, rate,
//   channel count, channels...,
//   parameter count, then per parameter: name length, name bytes, rank,
//   dims..., float32 little-endian data.
std::vector<std::uint8_t> encode_checkpoint(const ModelSpec& spec, const ParameterStore& params);
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec,
                     const ParameterStore& params);

/// MissingCheckpoint if the file does not exist, IncompatibleCheckpoint if
/// it is not a checkpoint, ParseError if it is truncated.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// As above, and IncompatibleCheckpoint unless the stored networks and
/// configuration equal `expected`.
Checkpoint load_checkpoint(const std::filesystem::path& path, const ModelSpec& expected);

}  // namespace pcup::nn

#endif  // PCUP_NN_CHECKPOINT_HPP
