#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reprank/chat_client.hpp"
#include "reprank/pipeline.hpp"

namespace reprank {

struct SimulationConfig {
  /// Base latent quality per model id.
  std::map<std::string, double> qualities;
  double noise_scale = 1.0;
  double tie_threshold = 0.0;
  /// Std-dev of per-prompt jitter added to each model's base quality.
  double prompt_spread = 0.0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t repetitions = 5;
  std::vector<double> fractions{0.25, 0.5, 0.75};
  SubsetKey subset_key = SubsetKey::kKendallsW;
  std::size_t cap_per_language = 100;
  bool include_all_equal = false;
  EndpointConfig endpoint;
  SimulationConfig simulation;
  std::filesystem::path prompts;
  std::filesystem::path responses;
  std::filesystem::path out_dir = "out";

  /// Throws ConfigError on the first invalid field.
  void validate() const;
};

/// One configurable field. The same name (with '-' replaced by '_') is the
/// config-file key, the flag is --<name>, and the environment variable is
/// REPRANK_<NAME> for scalar fields.
struct ConfigField {
  enum class Kind { kScalar, kList, kFlag };

  std::string name;
  Kind kind;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  /// Called before the first list value from a given layer is applied.
  std::function<void(RunConfig&)> reset_list;
};

const std::vector<ConfigField>& config_fields();

/// Applies a flat JSON object of config-file keys. Throws ConfigError.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Applies REPRANK_* variables for scalar and flag fields; list fields take a
/// comma-separated value.
void apply_environment(RunConfig& config, const EnvLookup& lookup);

std::optional<std::string> process_env(const std::string& name);

}  // namespace reprank
