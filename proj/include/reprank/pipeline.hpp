#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "reprank/aggregation.hpp"
#include "reprank/concordance.hpp"
#include "reprank/dataset.hpp"
#include "reprank/evaluator.hpp"

namespace reprank {

/// Draws min(cap, available) prompts per language uniformly without
/// replacement. Output is grouped by language (sorted) and keeps input order
/// within a language.
std::vector<PromptRecord> stratified_sample(const std::vector<PromptRecord>& prompts,
                                            std::size_t cap_per_language, std::uint64_t seed);

/// Keeps only response sets in which every response is complete.
std::vector<ResponseSet> filter_complete(const std::vector<ResponseSet>& sets);

struct RequestPlan {
  std::vector<EvaluationRequest> requests;
  /// Prompts that were not scheduled, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;
};

/// `repetitions` requests per prompt that has a response set, in prompt order.
RequestPlan plan_requests(const std::vector<PromptRecord>& prompts,
                          const std::vector<ResponseSet>& sets, std::size_t repetitions,
                          std::uint64_t seed);

/// Maps a model-space ranking onto canonical labels, where label k is the
/// k-th model id in sorted order. Throws std::invalid_argument if the ranking
/// does not cover exactly `sorted_models`.
Ranking to_canonical_ranking(const ModelRanking& ranking,
                             const std::vector<std::string>& sorted_models);

struct ScoredPrompt {
  ConsistencyScore score;
  BordaTotals totals;
  /// Model behind each canonical label.
  std::vector<std::string> label_models;
  PairSelection selection;
  PreferencePair pair;
};

struct Exclusion {
  std::string prompt_id;
  std::string reason;
};

struct ScoringOptions {
  std::size_t repetitions = 5;
  std::uint64_t seed = 0;
  /// Keep prompts whose Borda totals are all equal.
  bool include_all_equal = false;
};

struct ScoringResult {
  /// Ordered by prompt_id.
  std::vector<ScoredPrompt> scored;
  std::vector<Exclusion> excluded;
};

/// Scores every prompt that has `repetitions` parsed runs: Kendall's W,
/// agreement statistics, Borda totals and the chosen/rejected pair. Prompts
/// with failed runs, all-tied matrices or (by default) all-equal totals are
/// excluded with a reason.
ScoringResult score_prompts(const std::vector<EvaluationRun>& runs,
                            const std::vector<PromptRecord>& prompts,
                            const std::vector<ResponseSet>& sets, const ScoringOptions& options);

enum class SubsetKey { kKendallsW, kTopAgreement, kBottomAgreement };

std::string_view to_string(SubsetKey key);
/// Accepts "kendalls_w" (or "w"), "top_agreement", "bottom_agreement".
SubsetKey subset_key_from_string(std::string_view text);

struct SubsetSpec {
  double fraction = 1.0;
  SubsetKey key = SubsetKey::kKendallsW;
};

/// Number of prompts kept: ceil(fraction * count).
std::size_t subset_size(double fraction, std::size_t count);

/// Sorts by key descending, then prompt_id ascending, and keeps the first
/// subset_size entries. Returns the kept ids in that order.
std::vector<std::string> percentile_subset(const std::vector<ConsistencyScore>& scores,
                                           const SubsetSpec& spec);

class MissingPairError : public std::runtime_error {
 public:
  explicit MissingPairError(const std::string& prompt_id);
};

/// Writes one training record per subset id, ordered by prompt_id.
void export_preferences(const std::vector<PreferencePair>& pairs,
                        const std::vector<std::string>& subset,
                        const std::filesystem::path& path);

}  // namespace reprank
