#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reprank/ranking.hpp"

namespace reprank {

/// Per-label Borda points summed over the m repetitions of one prompt.
class BordaTotals {
 public:
  BordaTotals(std::string prompt_id, LabelSet labels, std::size_t evaluations,
              const std::array<double, kMaxLabels>& points);

  const std::string& prompt_id() const { return prompt_id_; }
  LabelSet labels() const { return labels_; }
  std::size_t evaluations() const { return evaluations_; }
  std::size_t objects() const { return labels_.size(); }
  double points(Label label) const;
  double sum() const;

 private:
  std::string prompt_id_;
  LabelSet labels_;
  std::size_t evaluations_;
  std::array<double, kMaxLabels> points_{};
};

struct PairSelection {
  Label chosen;
  Label rejected;
  /// Either extremum had more than one candidate.
  bool tie_broken = false;
  /// Every label had the same total; chosen/rejected are two distinct random
  /// draws and carry no preference signal.
  bool all_equal = false;
};

struct PreferencePair {
  std::string prompt_id;
  std::string language;
  std::string prompt_text;
  Label chosen_label = Label::from_index(0);
  Label rejected_label = Label::from_index(1);
  std::string chosen_model;
  std::string rejected_model;
  std::string chosen_text;
  std::string rejected_text;
  double w = 0.0;
  double chosen_points = 0.0;
  double rejected_points = 0.0;
  bool tie_broken = false;
};

/// Points n + 1 - rank; the best untied label gets n, the worst gets 1.
std::array<double, kMaxLabels> borda_points(const RankVector& ranks);

BordaTotals aggregate_borda(const RankingMatrix& matrix);

/// Chosen is drawn uniformly among the argmax labels and rejected uniformly
/// among the argmin labels other than chosen. Deterministic in (totals, seed).
/// Throws std::invalid_argument when fewer than two labels are present.
PairSelection select_pair(const BordaTotals& totals, std::uint64_t seed);

class UnmappedLabelError : public std::runtime_error {
 public:
  UnmappedLabelError(const std::string& prompt_id, Label label);
};

/// One prompt's Borda totals with the model behind each label (indexed by
/// label index) and the pair selected from it, if any.
struct PromptBorda {
  BordaTotals totals;
  std::vector<std::string> label_models;
  std::optional<PairSelection> selection;
};

struct ModelBordaRow {
  std::string model;
  double mean_total = 0.0;
  std::size_t prompts = 0;
  std::size_t chosen = 0;
  std::size_t rejected = 0;
};

/// Mean Borda total per model over the prompts it appears in, plus how often
/// each model was selected as chosen and as rejected. Rows are sorted by model.
std::vector<ModelBordaRow> per_model_borda_report(const std::vector<PromptBorda>& prompts);

}  // namespace reprank
