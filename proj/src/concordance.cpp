#include "reprank/concordance.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

namespace reprank {

DegenerateMatrixError::DegenerateMatrixError(const std::string& prompt_id)
    : std::runtime_error("DegenerateMatrix: every judge tied all objects for prompt '" +
                         prompt_id + "'") {}

double tie_correction(const RankVector& ranks) {
  auto values = ranks.values();
  std::sort(values.begin(), values.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j] == values[i]) {
      ++j;
    }
    const auto t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

double kendalls_w(const RankingMatrix& matrix) {
  const std::size_t m = matrix.judges();
  const std::size_t n = matrix.objects();
  if (m < 2 || n < 2) {
    throw std::invalid_argument("kendalls_w needs at least 2 judges and 2 objects (got m=" +
                                std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  const auto labels = matrix.labels().labels();
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);

  double ties = 0.0;
  for (const auto& row : matrix.rows()) {
    ties += tie_correction(row);
  }
  const double denominator = md * md * (nd * nd * nd - nd) - md * ties;
  if (denominator <= 0.0) {
    throw DegenerateMatrixError(matrix.prompt_id());
  }

  const double mean_sum = md * (nd + 1.0) / 2.0;
  double s = 0.0;
  for (Label label : labels) {
    double rank_sum = 0.0;
    for (const auto& row : matrix.rows()) {
      rank_sum += row.rank(label);
    }
    s += (rank_sum - mean_sum) * (rank_sum - mean_sum);
  }
  return std::clamp(12.0 * s / denominator, 0.0, 1.0);
}

namespace {

std::optional<Label> unique_at(const RankVector& row, double target) {
  for (Label label : row.labels().labels()) {
    if (row.rank(label) == target) {
      return label;
    }
  }
  return std::nullopt;
}

// Rank exactly 1 (or n) only occurs for a singleton first (last) group.
std::size_t modal_count(const RankingMatrix& matrix, double target) {
  std::array<std::size_t, kMaxLabels> counts{};
  for (const auto& row : matrix.rows()) {
    if (auto label = unique_at(row, target)) {
      ++counts[label->index()];
    }
  }
  return *std::max_element(counts.begin(), counts.end());
}

}  // namespace

AgreementStats agreement_stats(const RankingMatrix& matrix) {
  if (matrix.judges() == 0) {
    return {};
  }
  return {modal_count(matrix, 1.0), modal_count(matrix, static_cast<double>(matrix.objects()))};
}

ConsistencyScore score_consistency(const RankingMatrix& matrix) {
  const double w = kendalls_w(matrix);
  const auto agreement = agreement_stats(matrix);
  return {matrix.prompt_id(), w,          matrix.judges(), matrix.objects(),
          agreement.top_agreement, agreement.bottom_agreement};
}

}  // namespace reprank
