#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reprank/ranking.hpp"

namespace reprank {

inline constexpr std::string_view kPromptMarker = "<<<PROMPT>>>";
inline constexpr std::string_view kExplanationMarker = "<<<EXPLANATION>>>";
inline constexpr std::string_view kRankingMarker = "<<<RANKING>>>";

struct ModelResponse {
  std::string model_id;
  std::string text;
};

/// A ranking expressed over model ids rather than presentation labels.
struct ModelRanking {
  std::vector<std::vector<std::string>> groups;

  friend bool operator==(const ModelRanking&, const ModelRanking&) = default;
};

struct EvaluationRequest {
  std::string prompt_id;
  std::size_t repetition_index = 0;
  /// presentation_order[k] is the model shown as label k (A, B, ...).
  std::vector<std::string> presentation_order;
  /// Order in which the judge is told to explain the labels.
  std::vector<Label> explanation_order;
  std::string system_message;
  std::string user_message;

  friend bool operator==(const EvaluationRequest&, const EvaluationRequest&) = default;
};

enum class RequestErrorKind { kTooFewResponses, kTooManyResponses, kEmptyResponse, kDuplicateModel };

class RequestError : public std::runtime_error {
 public:
  RequestError(RequestErrorKind kind, const std::string& detail);
  RequestErrorKind kind() const { return kind_; }

 private:
  RequestErrorKind kind_;
};

class MarkerMissingError : public std::runtime_error {
 public:
  MarkerMissingError();
};

/// System message for an n-response evaluation, with the explanation order
/// spliced in. For n = 7 this is the reference evaluator template verbatim.
std::string render_system_message(std::size_t response_count, const std::vector<Label>& explanation_order);

/// Builds one randomized evaluation request. Responses are first put in
/// model-id order, then shuffled into presentation order; both permutations
/// come from (seed, prompt_id, repetition_index) only.
EvaluationRequest build_request(std::string_view prompt_id, std::string_view prompt_text,
                                std::vector<ModelResponse> responses, std::size_t repetition_index,
                                std::uint64_t seed);

/// Text of the first ranking expression after the last ranking marker.
/// Throws MarkerMissingError when there is no marker.
std::string extract_ranking_expression(std::string_view raw);

/// Parses judge output and maps label k back to presentation_order[k].
/// Throws MarkerMissingError or RankingParseError.
ModelRanking parse_eval_output(std::string_view raw, const std::vector<std::string>& presentation_order);

enum class OutcomeKind { kParsed, kParseFailure, kTransportFailure };

std::string_view to_string(OutcomeKind kind);
OutcomeKind outcome_kind_from_string(std::string_view text);

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::kTransportFailure;
  std::optional<ModelRanking> ranking;
  std::string reason;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

struct EvaluationRun {
  EvaluationRequest request;
  std::string raw_output;
  RunOutcome outcome;
  std::size_t attempts = 0;

  friend bool operator==(const EvaluationRun&, const EvaluationRun&) = default;
};

/// Classifies judge output into Parsed or ParseFailure.
RunOutcome classify_output(std::string_view raw, const std::vector<std::string>& presentation_order);

}  // namespace reprank
