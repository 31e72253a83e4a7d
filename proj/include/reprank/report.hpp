#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "reprank/aggregation.hpp"
#include "reprank/concordance.hpp"
#include "reprank/evaluator.hpp"

namespace reprank {

struct Subset {
  double fraction = 1.0;
  std::vector<std::string> prompt_ids;
};

/// "25%", "12.5%", "100%".
std::string fraction_label(double fraction);

struct LanguageRow {
  std::string language;
  /// One count per subset, in the order of StatsReport::subsets.
  std::vector<std::size_t> counts;
};

struct StatsReport {
  std::size_t parsed_runs = 0;
  std::size_t parse_failures = 0;
  std::size_t transport_failures = 0;

  std::vector<ModelBordaRow> models;

  std::size_t scored_prompts = 0;
  std::size_t unanimous_top = 0;
  std::size_t unanimous_bottom = 0;
  double unanimous_top_fraction = 0.0;
  double unanimous_bottom_fraction = 0.0;

  std::vector<double> subsets;
  std::vector<LanguageRow> languages;
};

/// `borda` and `pairs` cover the scored prompts; `scores` gives the per-prompt
/// agreement counts; `subsets` lists each subset's prompt ids.
StatsReport build_stats(const std::vector<EvaluationRun>& runs,
                        const std::vector<ConsistencyScore>& scores,
                        const std::vector<PromptBorda>& borda,
                        const std::vector<PreferencePair>& pairs,
                        const std::vector<Subset>& subsets);

std::string render_text(const StatsReport& report);

/// Writes borda_by_model.csv, unanimity.csv, language_counts.csv and
/// run_outcomes.csv into `dir`.
void write_csv_reports(const StatsReport& report, const std::filesystem::path& dir);

}  // namespace reprank
