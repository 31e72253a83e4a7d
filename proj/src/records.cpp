#include "reprank/records.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "reprank/errors.hpp"

namespace reprank {

using nlohmann::json;

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) {
    return value;
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

json to_json(const PromptRecord& record) {
  return {{"prompt_id", record.prompt_id},
          {"language", record.language},
          {"text", record.text},
          {"source", record.source}};
}

PromptRecord prompt_from_json(const json& j) {
  PromptRecord record{j.at("prompt_id").get<std::string>(), j.at("language").get<std::string>(),
                      j.at("text").get<std::string>(), j.value("source", std::string{})};
  if (record.text.empty()) {
    throw std::invalid_argument("prompt '" + record.prompt_id + "' has empty text");
  }
  if (record.language.empty()) {
    throw std::invalid_argument("prompt '" + record.prompt_id + "' has no language tag");
  }
  return record;
}

json to_json(const std::string& prompt_id, const ResponseEntry& entry) {
  return {{"prompt_id", prompt_id},
          {"model_id", entry.model_id},
          {"text", entry.text},
          {"complete", entry.complete}};
}

json to_json(const EvaluationRequest& request) {
  std::string explanation;
  for (Label label : request.explanation_order) {
    explanation += label.letter();
  }
  return {{"prompt_id", request.prompt_id},
          {"repetition_index", request.repetition_index},
          {"presentation_order", request.presentation_order},
          {"explanation_order", explanation},
          {"system_message", request.system_message},
          {"user_message", request.user_message}};
}

EvaluationRequest request_from_json(const json& j) {
  EvaluationRequest request;
  request.prompt_id = j.at("prompt_id").get<std::string>();
  request.repetition_index = j.at("repetition_index").get<std::size_t>();
  request.presentation_order = j.at("presentation_order").get<std::vector<std::string>>();
  for (char c : j.at("explanation_order").get<std::string>()) {
    request.explanation_order.push_back(Label::from_char(c));
  }
  request.system_message = j.at("system_message").get<std::string>();
  request.user_message = j.at("user_message").get<std::string>();
  return request;
}

json to_json(const EvaluationRun& run) {
  json j = to_json(run.request);
  j["raw_output"] = run.raw_output;
  j["outcome"] = std::string(to_string(run.outcome.kind));
  j["ranking"] = run.outcome.ranking ? json(run.outcome.ranking->groups) : json(nullptr);
  j["reason"] = run.outcome.reason;
  j["attempts"] = run.attempts;
  return j;
}

EvaluationRun run_from_json(const json& j) {
  EvaluationRun run;
  run.request = request_from_json(j);
  run.raw_output = j.at("raw_output").get<std::string>();
  run.outcome.kind = outcome_kind_from_string(j.at("outcome").get<std::string>());
  if (j.contains("ranking") && !j["ranking"].is_null()) {
    run.outcome.ranking =
        ModelRanking{j["ranking"].get<std::vector<std::vector<std::string>>>()};
  }
  run.outcome.reason = j.value("reason", std::string{});
  run.attempts = j.value("attempts", std::size_t{0});
  return run;
}

json to_json(const ConsistencyScore& score) {
  return {{"prompt_id", score.prompt_id},
          {"w", round_significant(score.w)},
          {"judges", score.judges},
          {"objects", score.objects},
          {"top_agreement", score.top_agreement},
          {"bottom_agreement", score.bottom_agreement}};
}

ConsistencyScore score_from_json(const json& j) {
  return {j.at("prompt_id").get<std::string>(),       j.at("w").get<double>(),
          j.at("judges").get<std::size_t>(),          j.at("objects").get<std::size_t>(),
          j.at("top_agreement").get<std::size_t>(),   j.at("bottom_agreement").get<std::size_t>()};
}

json to_json(const PreferencePair& pair) {
  return {{"prompt_id", pair.prompt_id},
          {"language", pair.language},
          {"prompt_text", pair.prompt_text},
          {"chosen_label", std::string(1, pair.chosen_label.letter())},
          {"rejected_label", std::string(1, pair.rejected_label.letter())},
          {"chosen_model", pair.chosen_model},
          {"rejected_model", pair.rejected_model},
          {"chosen_text", pair.chosen_text},
          {"rejected_text", pair.rejected_text},
          {"w", round_significant(pair.w)},
          {"chosen_points", pair.chosen_points},
          {"rejected_points", pair.rejected_points},
          {"tie_broken", pair.tie_broken}};
}

PreferencePair pair_from_json(const json& j) {
  PreferencePair pair;
  pair.prompt_id = j.at("prompt_id").get<std::string>();
  pair.language = j.at("language").get<std::string>();
  pair.prompt_text = j.at("prompt_text").get<std::string>();
  pair.chosen_label = Label::from_char(j.at("chosen_label").get<std::string>().at(0));
  pair.rejected_label = Label::from_char(j.at("rejected_label").get<std::string>().at(0));
  pair.chosen_model = j.at("chosen_model").get<std::string>();
  pair.rejected_model = j.at("rejected_model").get<std::string>();
  pair.chosen_text = j.at("chosen_text").get<std::string>();
  pair.rejected_text = j.at("rejected_text").get<std::string>();
  pair.w = j.at("w").get<double>();
  pair.chosen_points = j.at("chosen_points").get<double>();
  pair.rejected_points = j.at("rejected_points").get<double>();
  pair.tie_broken = j.at("tie_broken").get<bool>();
  return pair;
}

json to_export_json(const PreferencePair& pair) {
  return {{"prompt_id", pair.prompt_id},
          {"language", pair.language},
          {"prompt", pair.prompt_text},
          {"chosen", pair.chosen_text},
          {"rejected", pair.rejected_text},
          {"metadata",
           {{"w", round_significant(pair.w)},
            {"chosen_model", pair.chosen_model},
            {"rejected_model", pair.rejected_model},
            {"chosen_points", pair.chosen_points},
            {"rejected_points", pair.rejected_points},
            {"tie_broken", pair.tie_broken}}}};
}

std::vector<json> read_jsonl(const std::filesystem::path& path, bool tolerate_truncated_tail) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(std::move(line));
  }
  std::vector<json> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    try {
      records.push_back(json::parse(lines[i]));
    } catch (const json::parse_error& e) {
      if (tolerate_truncated_tail && i + 1 == lines.size()) {
        break;
      }
      throw IoError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return records;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + tmp.string());
    }
    out << content;
    if (!out.flush()) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
  std::ostringstream out;
  for (const auto& record : records) {
    out << record.dump() << '\n';
  }
  write_text(path, out.str());
}

namespace {

template <typename Fn>
auto decode_line(const std::filesystem::path& path, std::size_t index, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": record " + std::to_string(index + 1) + ": " + e.what());
  }
}

}  // namespace

std::vector<PromptRecord> load_prompts(const std::filesystem::path& path) {
  std::vector<PromptRecord> prompts;
  const auto records = read_jsonl(path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    prompts.push_back(decode_line(path, i, [&] { return prompt_from_json(records[i]); }));
  }
  return prompts;
}

std::vector<ResponseSet> load_responses(const std::filesystem::path& path) {
  std::vector<ResponseSet> sets;
  std::map<std::string, std::size_t> index;
  const auto records = read_jsonl(path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    decode_line(path, i, [&] {
      const auto& j = records[i];
      const auto prompt_id = j.at("prompt_id").get<std::string>();
      ResponseEntry entry{j.at("model_id").get<std::string>(), j.at("text").get<std::string>(),
                          j.value("complete", true)};
      auto [it, inserted] = index.emplace(prompt_id, sets.size());
      if (inserted) {
        sets.push_back({prompt_id, {}});
      }
      auto& entries = sets[it->second].entries;
      for (const auto& existing : entries) {
        if (existing.model_id == entry.model_id) {
          throw std::invalid_argument("duplicate response from model '" + entry.model_id +
                                      "' for prompt '" + prompt_id + "'");
        }
      }
      entries.push_back(std::move(entry));
      return 0;
    });
  }
  return sets;
}

}  // namespace reprank
