// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace traitscan {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
/// Hex digest of a file's bytes. Throws Error when unreadable.
std::string sha256_file(const std::filesystem::path& path);

struct StageRecord {
  std::string config_sha256;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::string> inputs;   // name -> sha256
  std::map<std::string, std::string> outputs;  // file name -> sha256
};

/// manifest.json of an output directory. Holds no timestamps, so reruns with
/// the same inputs and config produce the same bytes.
struct Manifest {
  std::string version = std::string(kToolVersion);
  std::map<std::string, std::string> configs;  // sha256 -> canonical config text
  std::map<std::string, StageRecord> stages;   // stage name -> record

  /// Missing file gives an empty manifest.
  static Manifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::string to_json() const;
};

}  // namespace traitscan
