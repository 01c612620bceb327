#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "tracker/bandit.hpp"
#include "tracker/harness.hpp"

// JSON run configuration. Parsing fails closed: unknown keys anywhere in the
// document are an error, as are missing required keys and values of the
// wrong shape. The parsed result also carries the fully resolved document
// (defaults filled in) so run manifests can embed exactly what was used.

namespace tracker {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ExperimentConfig experiment;
  std::optional<BanditConfig> bandit;  // present when the document has a bandit section
  nlohmann::json resolved;
};

/// Parse and validate the document shape (not the parameter constraints;
/// those are enforced when an experiment runs). Throws ConfigError with a
/// message naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);

/// Load from disk. Throws ConfigError for unreadable files or bad JSON.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace tracker
