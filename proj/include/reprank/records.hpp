#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "reprank/aggregation.hpp"
#include "reprank/concordance.hpp"
#include "reprank/dataset.hpp"
#include "reprank/evaluator.hpp"

namespace reprank {

/// Rounds to the given number of significant decimal digits, so that the
/// shortest round-trip printing of the result has at most that many digits.
double round_significant(double value, int digits = 12);

nlohmann::json to_json(const PromptRecord& record);
PromptRecord prompt_from_json(const nlohmann::json& j);

/// One line per (prompt, model) response.
nlohmann::json to_json(const std::string& prompt_id, const ResponseEntry& entry);

nlohmann::json to_json(const EvaluationRequest& request);
EvaluationRequest request_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvaluationRun& run);
EvaluationRun run_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConsistencyScore& score);
ConsistencyScore score_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PreferencePair& pair);
PreferencePair pair_from_json(const nlohmann::json& j);

/// Training record: prompt, chosen and rejected texts plus metadata.
nlohmann::json to_export_json(const PreferencePair& pair);

/// Reads one JSON object per non-empty line. Throws IoError naming the file
/// and line on failure. With tolerate_truncated_tail, an undecodable final
/// line (an interrupted append) is skipped.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path,
                                       bool tolerate_truncated_tail = false);

/// Writes compact JSON lines through a temporary file and rename.
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

/// Writes text through a temporary file and rename.
void write_text(const std::filesystem::path& path, const std::string& content);

std::vector<PromptRecord> load_prompts(const std::filesystem::path& path);
/// Groups response lines by prompt_id, keeping first-appearance order.
std::vector<ResponseSet> load_responses(const std::filesystem::path& path);

}  // namespace reprank
