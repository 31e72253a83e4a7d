#include "reprank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "reprank/random.hpp"
#include "reprank/records.hpp"

namespace reprank {

std::vector<PromptRecord> stratified_sample(const std::vector<PromptRecord>& prompts,
                                            std::size_t cap_per_language, std::uint64_t seed) {
  if (cap_per_language < 1) {
    throw std::invalid_argument("cap_per_language must be at least 1");
  }
  std::map<std::string, std::vector<std::size_t>> by_language;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    by_language[prompts[i].language].push_back(i);
  }
  std::vector<PromptRecord> sample;
  for (auto& [language, indices] : by_language) {
    if (indices.size() > cap_per_language) {
      Rng rng(derive_seed(seed, std::string_view("sample"), std::string_view(language)));
      rng.shuffle(std::span<std::size_t>(indices));
      indices.resize(cap_per_language);
      std::sort(indices.begin(), indices.end());
    }
    for (std::size_t i : indices) {
      sample.push_back(prompts[i]);
    }
  }
  return sample;
}

std::vector<ResponseSet> filter_complete(const std::vector<ResponseSet>& sets) {
  std::vector<ResponseSet> kept;
  std::copy_if(sets.begin(), sets.end(), std::back_inserter(kept), [](const ResponseSet& set) {
    return std::all_of(set.entries.begin(), set.entries.end(),
                       [](const ResponseEntry& e) { return e.complete; });
  });
  return kept;
}

RequestPlan plan_requests(const std::vector<PromptRecord>& prompts,
                          const std::vector<ResponseSet>& sets, std::size_t repetitions,
                          std::uint64_t seed) {
  if (repetitions < 1) {
    throw std::invalid_argument("repetitions must be at least 1");
  }
  std::map<std::string, const ResponseSet*> set_of;
  for (const auto& set : sets) {
    set_of[set.prompt_id] = &set;
  }
  RequestPlan plan;
  for (const auto& prompt : prompts) {
    auto it = set_of.find(prompt.prompt_id);
    if (it == set_of.end()) {
      plan.skipped.emplace_back(prompt.prompt_id, "no complete response set");
      continue;
    }
    std::vector<ModelResponse> responses;
    for (const auto& entry : it->second->entries) {
      responses.push_back({entry.model_id, entry.text});
    }
    try {
      for (std::size_t rep = 0; rep < repetitions; ++rep) {
        plan.requests.push_back(build_request(prompt.prompt_id, prompt.text, responses, rep, seed));
      }
    } catch (const RequestError& e) {
      std::erase_if(plan.requests,
                    [&](const EvaluationRequest& r) { return r.prompt_id == prompt.prompt_id; });
      plan.skipped.emplace_back(prompt.prompt_id, e.what());
    }
  }
  return plan;
}

Ranking to_canonical_ranking(const ModelRanking& ranking,
                             const std::vector<std::string>& sorted_models) {
  std::vector<Ranking::Group> groups;
  std::size_t count = 0;
  for (const auto& models : ranking.groups) {
    auto& group = groups.emplace_back();
    for (const auto& model : models) {
      auto it = std::lower_bound(sorted_models.begin(), sorted_models.end(), model);
      if (it == sorted_models.end() || *it != model) {
        throw std::invalid_argument("ranking mentions unknown model '" + model + "'");
      }
      group.push_back(Label::from_index(static_cast<std::size_t>(it - sorted_models.begin())));
      ++count;
    }
  }
  Ranking out(std::move(groups));
  if (count != sorted_models.size() || out.size() != sorted_models.size()) {
    throw std::invalid_argument("ranking does not cover every model exactly once");
  }
  return out;
}

namespace {

const ResponseEntry& entry_for(const ResponseSet& set, const std::string& model) {
  for (const auto& entry : set.entries) {
    if (entry.model_id == model) {
      return entry;
    }
  }
  throw std::invalid_argument("prompt '" + set.prompt_id + "' has no response from '" + model + "'");
}

}  // namespace

ScoringResult score_prompts(const std::vector<EvaluationRun>& runs,
                            const std::vector<PromptRecord>& prompts,
                            const std::vector<ResponseSet>& sets, const ScoringOptions& options) {
  std::map<std::string, std::vector<const EvaluationRun*>> runs_of;
  for (const auto& run : runs) {
    runs_of[run.request.prompt_id].push_back(&run);
  }
  std::map<std::string, const PromptRecord*> prompt_of;
  for (const auto& prompt : prompts) {
    prompt_of[prompt.prompt_id] = &prompt;
  }
  std::map<std::string, const ResponseSet*> set_of;
  for (const auto& set : sets) {
    set_of[set.prompt_id] = &set;
  }

  ScoringResult result;
  for (auto& [prompt_id, prompt_runs] : runs_of) {
    auto exclude = [&](std::string reason) {
      result.excluded.push_back({prompt_id, std::move(reason)});
    };
    const auto prompt_it = prompt_of.find(prompt_id);
    const auto set_it = set_of.find(prompt_id);
    if (prompt_it == prompt_of.end() || set_it == set_of.end()) {
      exclude("prompt or responses missing from inputs");
      continue;
    }
    std::sort(prompt_runs.begin(), prompt_runs.end(), [](const auto* a, const auto* b) {
      return a->request.repetition_index < b->request.repetition_index;
    });
    std::size_t parsed = 0;
    for (const auto* run : prompt_runs) {
      if (run->request.repetition_index < options.repetitions &&
          run->outcome.kind == OutcomeKind::kParsed) {
        ++parsed;
      }
    }
    if (parsed < options.repetitions) {
      exclude(std::to_string(parsed) + " of " + std::to_string(options.repetitions) +
              " evaluations parsed");
      continue;
    }

    std::vector<std::string> models;
    for (const auto& entry : set_it->second->entries) {
      models.push_back(entry.model_id);
    }
    std::sort(models.begin(), models.end());

    try {
      std::vector<RankVector> rows;
      for (const auto* run : prompt_runs) {
        if (run->request.repetition_index < options.repetitions) {
          rows.push_back(to_rank_vector(to_canonical_ranking(*run->outcome.ranking, models)));
        }
      }
      RankingMatrix matrix(prompt_id, std::move(rows));
      auto score = score_consistency(matrix);
      auto totals = aggregate_borda(matrix);
      const auto selection =
          select_pair(totals, derive_seed(options.seed, std::string_view("select"),
                                          std::string_view(prompt_id)));
      if (selection.all_equal && !options.include_all_equal) {
        exclude("AllEqual: every response has the same Borda total");
        continue;
      }
      const auto& prompt = *prompt_it->second;
      PreferencePair pair;
      pair.prompt_id = prompt_id;
      pair.language = prompt.language;
      pair.prompt_text = prompt.text;
      pair.chosen_label = selection.chosen;
      pair.rejected_label = selection.rejected;
      pair.chosen_model = models[selection.chosen.index()];
      pair.rejected_model = models[selection.rejected.index()];
      pair.chosen_text = entry_for(*set_it->second, pair.chosen_model).text;
      pair.rejected_text = entry_for(*set_it->second, pair.rejected_model).text;
      pair.w = score.w;
      pair.chosen_points = totals.points(selection.chosen);
      pair.rejected_points = totals.points(selection.rejected);
      pair.tie_broken = selection.tie_broken;
      result.scored.push_back(
          {std::move(score), std::move(totals), std::move(models), selection, std::move(pair)});
    } catch (const DegenerateMatrixError& e) {
      exclude(e.what());
    } catch (const std::invalid_argument& e) {
      exclude(e.what());
    }
  }
  return result;
}

std::string_view to_string(SubsetKey key) {
  switch (key) {
    case SubsetKey::kKendallsW:
      return "kendalls_w";
    case SubsetKey::kTopAgreement:
      return "top_agreement";
    case SubsetKey::kBottomAgreement:
      return "bottom_agreement";
  }
  return "unknown";
}

SubsetKey subset_key_from_string(std::string_view text) {
  if (text == "kendalls_w" || text == "w") return SubsetKey::kKendallsW;
  if (text == "top_agreement") return SubsetKey::kTopAgreement;
  if (text == "bottom_agreement") return SubsetKey::kBottomAgreement;
  throw std::invalid_argument("unknown subset key '" + std::string(text) + "'");
}

std::size_t subset_size(double fraction, std::size_t count) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subset fraction must be in (0, 1]");
  }
  // The slack absorbs representation error such as 0.1 * 30 = 3.0000000000000004.
  const double raw = fraction * static_cast<double>(count);
  const auto size = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(size, count);
}

std::vector<std::string> percentile_subset(const std::vector<ConsistencyScore>& scores,
                                           const SubsetSpec& spec) {
  auto key_of = [&](const ConsistencyScore& s) -> double {
    switch (spec.key) {
      case SubsetKey::kKendallsW:
        return s.w;
      case SubsetKey::kTopAgreement:
        return static_cast<double>(s.top_agreement);
      case SubsetKey::kBottomAgreement:
        return static_cast<double>(s.bottom_agreement);
    }
    return 0.0;
  };
  std::vector<const ConsistencyScore*> order;
  for (const auto& s : scores) {
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
    const double ka = key_of(*a);
    const double kb = key_of(*b);
    if (ka != kb) {
      return ka > kb;
    }
    return a->prompt_id < b->prompt_id;
  });
  order.resize(subset_size(spec.fraction, order.size()));
  std::vector<std::string> ids;
  for (const auto* s : order) {
    ids.push_back(s->prompt_id);
  }
  return ids;
}

MissingPairError::MissingPairError(const std::string& prompt_id)
    : std::runtime_error("MissingPair: subset references prompt '" + prompt_id +
                         "' which has no preference pair") {}

void export_preferences(const std::vector<PreferencePair>& pairs,
                        const std::vector<std::string>& subset,
                        const std::filesystem::path& path) {
  std::map<std::string, const PreferencePair*> pair_of;
  for (const auto& pair : pairs) {
    pair_of[pair.prompt_id] = &pair;
  }
  std::set<std::string> ids(subset.begin(), subset.end());
  std::vector<nlohmann::json> records;
  for (const auto& id : ids) {
    auto it = pair_of.find(id);
    if (it == pair_of.end()) {
      throw MissingPairError(id);
    }
    records.push_back(to_export_json(*it->second));
  }
  write_jsonl(path, records);
}

}  // namespace reprank
