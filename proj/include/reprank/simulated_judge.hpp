#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "reprank/evaluator.hpp"

namespace reprank {

/// Offline judge: each response scores latent_quality + N(0, noise_scale),
/// responses are sorted by score, and neighbours whose scores differ by at
/// most tie_threshold are reported as tied.
struct JudgeNoiseModel {
  std::map<std::string, double> latent_quality;
  double noise_scale = 0.0;
  double tie_threshold = 0.0;

  /// Throws std::invalid_argument for a negative scale or threshold.
  void validate() const;
};

class MissingQualityError : public std::runtime_error {
 public:
  explicit MissingQualityError(const std::string& model_id);
};

/// Judge output in the evaluator template format. Deterministic in
/// (request, noise, seed); always parses under parse_eval_output.
std::string simulate_judgment(const EvaluationRequest& request, const JudgeNoiseModel& noise,
                              std::uint64_t seed);

/// simulate_judgment wrapped as a complete run.
EvaluationRun simulate_run(const EvaluationRequest& request, const JudgeNoiseModel& noise,
                           std::uint64_t seed);

}  // namespace reprank
