#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "reprank/ranking.hpp"

namespace reprank {

/// Raised when every judge ties every object, leaving W undefined.
class DegenerateMatrixError : public std::runtime_error {
 public:
  explicit DegenerateMatrixError(const std::string& prompt_id);
};

struct AgreementStats {
  std::size_t top_agreement = 0;
  std::size_t bottom_agreement = 0;
};

struct ConsistencyScore {
  std::string prompt_id;
  double w = 0.0;
  std::size_t judges = 0;
  std::size_t objects = 0;
  std::size_t top_agreement = 0;
  std::size_t bottom_agreement = 0;
};

/// Sum over tie groups of (t^3 - t); zero iff the vector has no ties.
double tie_correction(const RankVector& ranks);

/// Kendall's coefficient of concordance with the tie-corrected denominator
///
///   W = 12 S / (m^2 (n^3 - n) - m * sum_j T_j)
///
/// where S is the sum of squared deviations of the per-object rank sums from
/// m (n + 1) / 2 and T_j is tie_correction of row j. Requires m >= 2 and
/// n >= 2 (std::invalid_argument otherwise); throws DegenerateMatrixError when
/// the denominator vanishes.
double kendalls_w(const RankingMatrix& matrix);

/// Counts rows whose unique best (worst) label equals the most frequent
/// unique best (worst) label. A row tied at the extremum contributes nothing.
AgreementStats agreement_stats(const RankingMatrix& matrix);

/// kendalls_w plus agreement_stats in one record.
ConsistencyScore score_consistency(const RankingMatrix& matrix);

}  // namespace reprank
