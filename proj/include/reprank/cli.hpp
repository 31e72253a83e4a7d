#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "reprank/chat_client.hpp"
#include "reprank/config.hpp"

namespace reprank {

/// Process exit codes, one per error category.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitMissingInput = 3,
  kExitIo = 4,
  kExitData = 5,
};

/// Seams for tests: how the evaluate stage reaches an endpoint, how it waits
/// between retries, and where environment variables come from.
struct CliHooks {
  std::function<std::unique_ptr<ChatBackend>(const EndpointConfig&)> make_backend;
  Sleeper sleeper = sleep_for;
  EnvLookup env = process_env;
};

/// Stage file names inside the output directory.
namespace stage_files {
inline constexpr const char* kSampledPrompts = "sampled_prompts.jsonl";
inline constexpr const char* kCompleteResponses = "responses_complete.jsonl";
inline constexpr const char* kRequests = "eval_requests.jsonl";
inline constexpr const char* kRuns = "runs.jsonl";
inline constexpr const char* kScores = "scores.jsonl";
inline constexpr const char* kBorda = "borda.jsonl";
inline constexpr const char* kPairs = "pairs.jsonl";
inline constexpr const char* kSubsets = "subsets.json";
inline constexpr const char* kReport = "report.txt";
}  // namespace stage_files

/// Name of the export file for a subset fraction, e.g. "preferences_25.jsonl".
std::string export_file_name(double fraction);

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks = {});

}  // namespace reprank
