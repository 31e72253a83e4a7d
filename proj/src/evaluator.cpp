#include "reprank/evaluator.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "reprank/random.hpp"

namespace reprank {
namespace {

constexpr std::array<std::string_view, 27> kNumberWords = {
    "zero",       "one",        "two",         "three",     "four",      "five",
    "six",        "seven",      "eight",       "nine",      "ten",       "eleven",
    "twelve",     "thirteen",   "fourteen",    "fifteen",   "sixteen",   "seventeen",
    "eighteen",   "nineteen",   "twenty",      "twenty-one", "twenty-two", "twenty-three",
    "twenty-four", "twenty-five", "twenty-six"};

std::string_view request_error_name(RequestErrorKind kind) {
  switch (kind) {
    case RequestErrorKind::kTooFewResponses:
      return "TooFewResponses";
    case RequestErrorKind::kTooManyResponses:
      return "TooManyResponses";
    case RequestErrorKind::kEmptyResponse:
      return "EmptyResponse";
    case RequestErrorKind::kDuplicateModel:
      return "DuplicateModel";
  }
  return "RequestError";
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

bool is_wrapper(char c) { return c == '\'' || c == '"' || c == '`' || c == '*'; }

}  // namespace

RequestError::RequestError(RequestErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(request_error_name(kind)) + ": " + detail), kind_(kind) {}

MarkerMissingError::MarkerMissingError()
    : std::runtime_error("MarkerMissing: evaluator output has no <<<RANKING>>> marker") {}

std::string render_system_message(std::size_t response_count,
                                  const std::vector<Label>& explanation_order) {
  std::string shuffled;
  for (std::size_t i = 0; i < explanation_order.size(); ++i) {
    if (i > 0) {
      shuffled += ", ";
    }
    shuffled += explanation_order[i].letter();
  }
  std::string out;
  out += "You are an evaluator AI. Your task is to rank multiple responses to a given prompt from best to worst\n";
  out += "You will first be given the original prompt, and then ";
  out += kNumberWords.at(response_count);
  out += " possible responses to that prompt, labelled alphabetically.\n";
  out += "You should first write a very brief (<40 words per model) explanation of the merits and drawbacks of the responses, before giving the ranking itself.\n";
  out += "This explanation of each response should be in a randomised order (go in the order of '";
  out += shuffled;
  out += "').\n";
  out += "Make sure you explain and rank all responses, do not leave any out in your explanation or ranking.\n";
  out += "The ranking should be a list of alphabet characters that describe the ranking, with '>' denoting the left item is ranked higher than the right item and '=' denoting that the items are of equal ranking (e.g. 'Z>Y>X=W>V>U=T').\n";
  out += "\nThe user input will look like this:\n\n```\n<<<PROMPT>>>\nAN EXAMPLE USER PROMPT\n";
  for (std::size_t i = 0; i < response_count; ++i) {
    const char letter = Label::from_index(i).letter();
    out += "\n<<<RESPONSE ";
    out += letter;
    out += ">>>\nEXAMPLE RESPONSE ";
    out += letter;
    out += '\n';
  }
  out += "```\n\nand your output should look like this:\n\n```\n";
  out += "<<<EXPLANATION>>>\n[SHORT EXPLANATION OF THE RANKING]\n\n";
  out += "<<<RANKING>>>\n[SEPARATED LIST OF ALPHABET CHARACTERS THAT DESCRIBE THE RANKING]\n```\n\n";
  out += "The evaluation rubric is as follows:\n\n";
  out += "* Is the response relevant? The response should be the best possible answer.\n";
  out += "* Is the response truthful?\n";
  out += "* Is the response accurate? The response should accurately fulfill the prompt's request.\n";
  out += "* If a creative answer is expected, is the response creative? If an analytical answer is expected, is the response factual/objectively correct?\n";
  out += "* Is the response written naturally and fluently in the language that the prompter would expect?\n";
  out += "* Is the response detailed? The response should at minimum satisfy the full level of detail required by the prompt.\n";
  return out;
}

EvaluationRequest build_request(std::string_view prompt_id, std::string_view prompt_text,
                                std::vector<ModelResponse> responses, std::size_t repetition_index,
                                std::uint64_t seed) {
  if (responses.size() < 2) {
    throw RequestError(RequestErrorKind::kTooFewResponses,
                       "prompt '" + std::string(prompt_id) + "' has fewer than two responses");
  }
  if (responses.size() > kMaxLabels) {
    throw RequestError(RequestErrorKind::kTooManyResponses,
                       "prompt '" + std::string(prompt_id) + "' has " +
                           std::to_string(responses.size()) + " responses, at most 26 allowed");
  }
  std::set<std::string> models;
  for (const auto& response : responses) {
    if (response.text.empty()) {
      throw RequestError(RequestErrorKind::kEmptyResponse,
                         "model '" + response.model_id + "' returned an empty response for prompt '" +
                             std::string(prompt_id) + "'");
    }
    if (!models.insert(response.model_id).second) {
      throw RequestError(RequestErrorKind::kDuplicateModel,
                         "model '" + response.model_id + "' appears twice for prompt '" +
                             std::string(prompt_id) + "'");
    }
  }
  std::sort(responses.begin(), responses.end(),
            [](const ModelResponse& a, const ModelResponse& b) { return a.model_id < b.model_id; });

  Rng rng(derive_seed(seed, std::string_view("evaluate"), prompt_id,
                      static_cast<std::uint64_t>(repetition_index)));
  rng.shuffle(std::span<ModelResponse>(responses));

  EvaluationRequest request;
  request.prompt_id = std::string(prompt_id);
  request.repetition_index = repetition_index;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    request.presentation_order.push_back(responses[i].model_id);
    request.explanation_order.push_back(Label::from_index(i));
  }
  rng.shuffle(std::span<Label>(request.explanation_order));
  request.system_message = render_system_message(responses.size(), request.explanation_order);

  std::string user;
  user += kPromptMarker;
  user += '\n';
  user += prompt_text;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    user += "\n\n<<<RESPONSE ";
    user += Label::from_index(i).letter();
    user += ">>>\n";
    user += responses[i].text;
  }
  request.user_message = std::move(user);
  return request;
}

std::string extract_ranking_expression(std::string_view raw) {
  const auto marker = raw.rfind(kRankingMarker);
  if (marker == std::string_view::npos) {
    throw MarkerMissingError();
  }
  std::string_view rest = raw.substr(marker + kRankingMarker.size());
  while (!rest.empty()) {
    const auto newline = rest.find('\n');
    std::string_view line = trim(rest.substr(0, newline));
    rest = newline == std::string_view::npos ? std::string_view{} : rest.substr(newline + 1);
    if (line.starts_with("```")) {
      continue;
    }
    while (!line.empty() && is_wrapper(line.front())) {
      line.remove_prefix(1);
    }
    while (!line.empty() && is_wrapper(line.back())) {
      line.remove_suffix(1);
    }
    line = trim(line);
    if (!line.empty()) {
      return std::string(line);
    }
  }
  return {};
}

ModelRanking parse_eval_output(std::string_view raw,
                               const std::vector<std::string>& presentation_order) {
  const auto expr = extract_ranking_expression(raw);
  const auto ranking = parse_ranking(expr, LabelSet::first_n(presentation_order.size()));
  ModelRanking out;
  for (const auto& group : ranking.groups()) {
    auto& models = out.groups.emplace_back();
    for (Label label : group) {
      models.push_back(presentation_order[label.index()]);
    }
    std::sort(models.begin(), models.end());
  }
  return out;
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kParsed:
      return "parsed";
    case OutcomeKind::kParseFailure:
      return "parse_failure";
    case OutcomeKind::kTransportFailure:
      return "transport_failure";
  }
  return "unknown";
}

OutcomeKind outcome_kind_from_string(std::string_view text) {
  if (text == "parsed") return OutcomeKind::kParsed;
  if (text == "parse_failure") return OutcomeKind::kParseFailure;
  if (text == "transport_failure") return OutcomeKind::kTransportFailure;
  throw std::invalid_argument("unknown run outcome '" + std::string(text) + "'");
}

RunOutcome classify_output(std::string_view raw, const std::vector<std::string>& presentation_order) {
  try {
    return {OutcomeKind::kParsed, parse_eval_output(raw, presentation_order), {}};
  } catch (const MarkerMissingError& e) {
    return {OutcomeKind::kParseFailure, std::nullopt, e.what()};
  } catch (const RankingParseError& e) {
    return {OutcomeKind::kParseFailure, std::nullopt, e.what()};
  }
}

}  // namespace reprank
