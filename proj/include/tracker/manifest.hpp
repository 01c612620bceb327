#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

// Run manifest: one JSON file per CLI invocation recording the resolved
// configuration, seed, timestamps and a digest of every artifact written.
// Two runs with the same configuration and seed must produce matching
// digests, which is what the reproducibility checks compare.

namespace tracker {

inline constexpr const char* kToolVersion = "1.0.0";

/// FNV-1a over the file bytes, as 16 lowercase hex digits.
std::string file_digest(const std::filesystem::path& path);

struct RunManifest {
  std::string command;          // CLI subcommand
  nlohmann::json resolved_config;
  std::uint64_t master_seed = 0;
  std::string rng = "splitmix64-counter";
  std::string started_at;       // ISO 8601, UTC
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> outputs;  // filename -> digest

  void add_output(const std::filesystem::path& path);
};

std::string utc_timestamp();

/// Serialize to manifest.json inside the output directory.
void write_manifest(const RunManifest& m, const std::filesystem::path& out_dir);

}  // namespace tracker
