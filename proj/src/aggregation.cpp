#include "reprank/aggregation.hpp"

#include <algorithm>

#include "reprank/random.hpp"

namespace reprank {

BordaTotals::BordaTotals(std::string prompt_id, LabelSet labels, std::size_t evaluations,
                         const std::array<double, kMaxLabels>& points)
    : prompt_id_(std::move(prompt_id)), labels_(labels), evaluations_(evaluations) {
  for (Label label : labels.labels()) {
    points_[label.index()] = points[label.index()];
  }
}

double BordaTotals::points(Label label) const {
  if (!labels_.contains(label)) {
    throw std::out_of_range(std::string("label ") + label.letter() + " has no Borda total");
  }
  return points_[label.index()];
}

double BordaTotals::sum() const {
  double total = 0.0;
  for (Label label : labels_.labels()) {
    total += points_[label.index()];
  }
  return total;
}

std::array<double, kMaxLabels> borda_points(const RankVector& ranks) {
  std::array<double, kMaxLabels> points{};
  const double top = static_cast<double>(ranks.size()) + 1.0;
  for (Label label : ranks.labels().labels()) {
    points[label.index()] = top - ranks.rank(label);
  }
  return points;
}

BordaTotals aggregate_borda(const RankingMatrix& matrix) {
  std::array<double, kMaxLabels> totals{};
  for (const auto& row : matrix.rows()) {
    const auto points = borda_points(row);
    for (std::size_t i = 0; i < kMaxLabels; ++i) {
      totals[i] += points[i];
    }
  }
  return BordaTotals(matrix.prompt_id(), matrix.labels(), matrix.judges(), totals);
}

PairSelection select_pair(const BordaTotals& totals, std::uint64_t seed) {
  const auto labels = totals.labels().labels();
  if (labels.size() < 2) {
    throw std::invalid_argument("select_pair needs at least two labels for prompt '" +
                                totals.prompt_id() + "'");
  }
  double best = totals.points(labels.front());
  double worst = best;
  for (Label label : labels) {
    best = std::max(best, totals.points(label));
    worst = std::min(worst, totals.points(label));
  }
  std::vector<Label> top;
  std::vector<Label> bottom;
  for (Label label : labels) {
    if (totals.points(label) == best) {
      top.push_back(label);
    }
    if (totals.points(label) == worst) {
      bottom.push_back(label);
    }
  }

  Rng rng(seed);
  PairSelection selection{top[rng.uniform_index(top.size())], labels.front()};
  std::erase(bottom, selection.chosen);
  selection.rejected = bottom[rng.uniform_index(bottom.size())];
  selection.all_equal = best == worst;
  selection.tie_broken = top.size() > 1 || bottom.size() > 1 || selection.all_equal;
  return selection;
}

UnmappedLabelError::UnmappedLabelError(const std::string& prompt_id, Label label)
    : std::runtime_error(std::string("UnmappedLabel: label ") + label.letter() +
                         " of prompt '" + prompt_id + "' has no model") {}

std::vector<ModelBordaRow> per_model_borda_report(const std::vector<PromptBorda>& prompts) {
  struct Accumulator {
    double sum = 0.0;
    std::size_t prompts = 0;
    std::size_t chosen = 0;
    std::size_t rejected = 0;
  };
  std::map<std::string, Accumulator> by_model;

  for (const auto& prompt : prompts) {
    const auto& totals = prompt.totals;
    auto model_of = [&](Label label) -> const std::string& {
      if (label.index() >= prompt.label_models.size() ||
          prompt.label_models[label.index()].empty()) {
        throw UnmappedLabelError(totals.prompt_id(), label);
      }
      return prompt.label_models[label.index()];
    };
    for (Label label : totals.labels().labels()) {
      auto& acc = by_model[model_of(label)];
      acc.sum += totals.points(label);
      ++acc.prompts;
    }
    if (prompt.selection) {
      ++by_model[model_of(prompt.selection->chosen)].chosen;
      ++by_model[model_of(prompt.selection->rejected)].rejected;
    }
  }

  std::vector<ModelBordaRow> rows;
  for (const auto& [model, acc] : by_model) {
    rows.push_back({model, acc.prompts ? acc.sum / static_cast<double>(acc.prompts) : 0.0,
                    acc.prompts, acc.chosen, acc.rejected});
  }
  return rows;
}

}  // namespace reprank
