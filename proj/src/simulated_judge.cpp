#include "reprank/simulated_judge.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <vector>

#include "reprank/random.hpp"

namespace reprank {

void JudgeNoiseModel::validate() const {
  if (noise_scale < 0.0) {
    throw std::invalid_argument("noise_scale must be non-negative");
  }
  if (tie_threshold < 0.0) {
    throw std::invalid_argument("tie_threshold must be non-negative");
  }
}

MissingQualityError::MissingQualityError(const std::string& model_id)
    : std::runtime_error("MissingQuality: no latent quality for model '" + model_id + "'") {}

std::string simulate_judgment(const EvaluationRequest& request, const JudgeNoiseModel& noise,
                              std::uint64_t seed) {
  noise.validate();
  const std::size_t n = request.presentation_order.size();
  Rng rng(derive_seed(seed, std::string_view("judge"), request.prompt_id,
                      static_cast<std::uint64_t>(request.repetition_index)));

  std::vector<double> scores(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& model = request.presentation_order[k];
    auto it = noise.latent_quality.find(model);
    if (it == noise.latent_quality.end()) {
      throw MissingQualityError(model);
    }
    scores[k] = it->second + noise.noise_scale * rng.standard_normal();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::string expr;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      expr += scores[order[i - 1]] - scores[order[i]] <= noise.tie_threshold ? '=' : '>';
    }
    expr += Label::from_index(order[i]).letter();
  }

  std::string out;
  out += kExplanationMarker;
  out += '\n';
  for (Label label : request.explanation_order) {
    char line[64];
    std::snprintf(line, sizeof(line), "%c: perceived quality %.3f.\n", label.letter(),
                  scores[label.index()]);
    out += line;
  }
  out += '\n';
  out += kRankingMarker;
  out += '\n';
  out += expr;
  return out;
}

EvaluationRun simulate_run(const EvaluationRequest& request, const JudgeNoiseModel& noise,
                           std::uint64_t seed) {
  EvaluationRun run;
  run.request = request;
  run.raw_output = simulate_judgment(request, noise, seed);
  run.outcome = classify_output(run.raw_output, request.presentation_order);
  run.attempts = 1;
  return run;
}

}  // namespace reprank
