#include "reprank/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "reprank/batch.hpp"
#include "reprank/errors.hpp"
#include "reprank/random.hpp"
#include "reprank/records.hpp"
#include "reprank/report.hpp"
#include "reprank/run_store.hpp"
#include "reprank/simulated_judge.hpp"

namespace reprank {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kProducerSample = "sample";
constexpr const char* kProducerBuild = "build-evals";
constexpr const char* kProducerEvaluate = "evaluate` or `simulate";
constexpr const char* kProducerScore = "score";
constexpr const char* kProducerFilter = "filter";

fs::path require(const fs::path& path, const std::string& producer) {
  if (!fs::exists(path)) {
    throw MissingInputError(path.string(), producer);
  }
  return path;
}

fs::path require_config_path(const fs::path& path, const std::string& flag) {
  if (path.empty()) {
    throw ConfigError("--" + flag + " is required for this stage");
  }
  if (!fs::exists(path)) {
    throw MissingInputError(path.string(), "--" + flag);
  }
  return path;
}

std::vector<EvaluationRequest> load_requests(const fs::path& path) {
  std::vector<EvaluationRequest> requests;
  for (const auto& j : read_jsonl(path)) {
    requests.push_back(request_from_json(j));
  }
  return requests;
}

std::vector<ConsistencyScore> load_scores(const fs::path& path) {
  std::vector<ConsistencyScore> scores;
  for (const auto& j : read_jsonl(path)) {
    scores.push_back(score_from_json(j));
  }
  return scores;
}

std::vector<PreferencePair> load_pairs(const fs::path& path) {
  std::vector<PreferencePair> pairs;
  for (const auto& j : read_jsonl(path)) {
    pairs.push_back(pair_from_json(j));
  }
  return pairs;
}

std::vector<Subset> load_subsets(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<Subset> subsets;
  try {
    const auto doc = json::parse(in);
    for (const auto& s : doc.at("subsets")) {
      subsets.push_back(
          {s.at("fraction").get<double>(), s.at("prompt_ids").get<std::vector<std::string>>()});
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return subsets;
}

/// Fractions requested plus the full set, descending.
std::vector<double> subset_fractions(const RunConfig& config) {
  std::vector<double> fractions = config.fractions;
  fractions.push_back(1.0);
  std::sort(fractions.begin(), fractions.end(), std::greater<>());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  return fractions;
}

int stage_sample(const RunConfig& config, std::ostream& out) {
  const auto prompts = load_prompts(require_config_path(config.prompts, "prompts"));
  const auto sample = stratified_sample(prompts, config.cap_per_language, config.seed);
  std::vector<json> records;
  for (const auto& prompt : sample) {
    records.push_back(to_json(prompt));
  }
  const auto path = config.out_dir / stage_files::kSampledPrompts;
  write_jsonl(path, records);
  out << "sample: " << sample.size() << " of " << prompts.size() << " prompts -> "
      << path.string() << "\n";
  return kExitOk;
}

int stage_build(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto prompts =
      load_prompts(require(config.out_dir / stage_files::kSampledPrompts, kProducerSample));
  const auto all_sets = load_responses(require_config_path(config.responses, "responses"));
  const auto sets = filter_complete(all_sets);

  std::vector<json> response_records;
  for (const auto& set : sets) {
    for (const auto& entry : set.entries) {
      response_records.push_back(to_json(set.prompt_id, entry));
    }
  }
  write_jsonl(config.out_dir / stage_files::kCompleteResponses, response_records);

  const auto plan = plan_requests(prompts, sets, config.repetitions, config.seed);
  for (const auto& [prompt_id, reason] : plan.skipped) {
    err << "warning: prompt " << prompt_id << " skipped: " << reason << "\n";
  }
  std::vector<json> records;
  for (const auto& request : plan.requests) {
    records.push_back(to_json(request));
  }
  const auto path = config.out_dir / stage_files::kRequests;
  write_jsonl(path, records);
  out << "build-evals: " << sets.size() << " of " << all_sets.size()
      << " response sets complete; " << plan.requests.size() << " requests -> " << path.string()
      << "\n";
  return kExitOk;
}

void summarize_runs(const std::vector<EvaluationRun>& runs, const std::string& stage,
                    const fs::path& path, std::ostream& out) {
  std::map<OutcomeKind, std::size_t> counts;
  for (const auto& run : runs) {
    ++counts[run.outcome.kind];
  }
  out << stage << ": " << runs.size() << " runs (" << counts[OutcomeKind::kParsed] << " parsed, "
      << counts[OutcomeKind::kParseFailure] << " parse failures, "
      << counts[OutcomeKind::kTransportFailure] << " transport failures) -> " << path.string()
      << "\n";
}

int stage_evaluate(const RunConfig& config, const CliHooks& hooks, std::ostream& out,
                   std::ostream& err) {
  const auto requests = load_requests(require(config.out_dir / stage_files::kRequests, kProducerBuild));
  config.endpoint.validate();
  std::unique_ptr<ChatBackend> backend =
      hooks.make_backend ? hooks.make_backend(config.endpoint)
                         : std::make_unique<HttpChatBackend>(config.endpoint);
  RunStore store(config.out_dir / stage_files::kRuns);
  auto log = [&err](const std::string& line) { err << line << "\n"; };
  const auto runs = evaluate_batch(requests, *backend, batch_options_from(config.endpoint), store,
                                   hooks.sleeper, log);
  summarize_runs(runs, "evaluate", store.path(), out);
  return kExitOk;
}

int stage_simulate(const RunConfig& config, std::ostream& out) {
  const auto requests = load_requests(require(config.out_dir / stage_files::kRequests, kProducerBuild));
  if (config.simulation.qualities.empty()) {
    throw ConfigError("simulate needs latent qualities (--quality MODEL=VALUE)");
  }
  const auto judge_seed = derive_seed(config.seed, std::string_view("simulate"));
  Judge judge = [&](const EvaluationRequest& request) {
    JudgeNoiseModel noise{{}, config.simulation.noise_scale, config.simulation.tie_threshold};
    for (const auto& model : request.presentation_order) {
      auto it = config.simulation.qualities.find(model);
      if (it == config.simulation.qualities.end()) {
        throw ConfigError("simulate: no --quality given for model '" + model + "'");
      }
      Rng jitter(derive_seed(config.seed, std::string_view("latent"),
                             std::string_view(request.prompt_id), std::string_view(model)));
      noise.latent_quality[model] =
          it->second + config.simulation.prompt_spread * jitter.standard_normal();
    }
    return simulate_run(request, noise, judge_seed);
  };
  RunStore store(config.out_dir / stage_files::kRuns);
  const auto runs = evaluate_batch(requests, judge, store, 1);
  summarize_runs(runs, "simulate", store.path(), out);
  return kExitOk;
}

int stage_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto runs_path = require(config.out_dir / stage_files::kRuns, kProducerEvaluate);
  const auto prompts =
      load_prompts(require(config.out_dir / stage_files::kSampledPrompts, kProducerSample));
  const auto sets =
      load_responses(require(config.out_dir / stage_files::kCompleteResponses, kProducerBuild));
  if (config.repetitions < 2) {
    throw ConfigError("score needs at least 2 repetitions for Kendall's W");
  }
  const auto runs = load_runs(runs_path);
  const auto result =
      score_prompts(runs, prompts, sets, {config.repetitions, config.seed, config.include_all_equal});
  for (const auto& exclusion : result.excluded) {
    err << "warning: prompt " << exclusion.prompt_id << " excluded: " << exclusion.reason << "\n";
  }

  std::vector<json> scores;
  std::vector<json> borda;
  std::vector<json> pairs;
  for (const auto& scored : result.scored) {
    scores.push_back(to_json(scored.score));
    json points = json::object();
    for (Label label : scored.totals.labels().labels()) {
      points[scored.label_models[label.index()]] = scored.totals.points(label);
    }
    borda.push_back({{"prompt_id", scored.score.prompt_id},
                     {"evaluations", scored.totals.evaluations()},
                     {"points", std::move(points)}});
    pairs.push_back(to_json(scored.pair));
  }
  write_jsonl(config.out_dir / stage_files::kScores, scores);
  write_jsonl(config.out_dir / stage_files::kBorda, borda);
  write_jsonl(config.out_dir / stage_files::kPairs, pairs);
  out << "score: " << result.scored.size() << " prompts scored, " << result.excluded.size()
      << " excluded -> " << (config.out_dir / stage_files::kScores).string() << "\n";
  return kExitOk;
}

int stage_filter(const RunConfig& config, std::ostream& out) {
  const auto scores = load_scores(require(config.out_dir / stage_files::kScores, kProducerScore));
  json subsets = json::array();
  for (double fraction : subset_fractions(config)) {
    const auto ids = percentile_subset(scores, {fraction, config.subset_key});
    subsets.push_back({{"fraction", fraction}, {"prompt_ids", ids}});
    out << "filter: " << fraction_label(fraction) << " -> " << ids.size() << " prompts\n";
  }
  const json doc = {{"key", std::string(to_string(config.subset_key))},
                    {"scored_prompts", scores.size()},
                    {"subsets", std::move(subsets)}};
  write_text(config.out_dir / stage_files::kSubsets, doc.dump(2) + "\n");
  return kExitOk;
}

int stage_export(const RunConfig& config, std::ostream& out) {
  const auto pairs = load_pairs(require(config.out_dir / stage_files::kPairs, kProducerScore));
  const auto subsets = load_subsets(require(config.out_dir / stage_files::kSubsets, kProducerFilter));
  for (const auto& subset : subsets) {
    const auto path = config.out_dir / export_file_name(subset.fraction);
    export_preferences(pairs, subset.prompt_ids, path);
    out << "export: " << subset.prompt_ids.size() << " pairs -> " << path.string() << "\n";
  }
  return kExitOk;
}

int stage_stats(const RunConfig& config, std::ostream& out) {
  const auto runs = load_runs(require(config.out_dir / stage_files::kRuns, kProducerEvaluate));
  const auto scores = load_scores(require(config.out_dir / stage_files::kScores, kProducerScore));
  const auto pairs = load_pairs(require(config.out_dir / stage_files::kPairs, kProducerScore));
  const auto subsets = load_subsets(require(config.out_dir / stage_files::kSubsets, kProducerFilter));

  std::map<std::string, const PreferencePair*> pair_of;
  for (const auto& pair : pairs) {
    pair_of[pair.prompt_id] = &pair;
  }
  std::vector<PromptBorda> borda;
  for (const auto& j : read_jsonl(require(config.out_dir / stage_files::kBorda, kProducerScore))) {
    const auto prompt_id = j.at("prompt_id").get<std::string>();
    std::array<double, kMaxLabels> points{};
    std::vector<std::string> models;
    // Object keys iterate in sorted order, matching the canonical labels.
    for (const auto& [model, value] : j.at("points").items()) {
      points[models.size()] = value.get<double>();
      models.push_back(model);
    }
    BordaTotals totals(prompt_id, LabelSet::first_n(models.size()),
                       j.at("evaluations").get<std::size_t>(), points);
    std::optional<PairSelection> selection;
    if (auto it = pair_of.find(prompt_id); it != pair_of.end()) {
      selection = PairSelection{it->second->chosen_label, it->second->rejected_label,
                                it->second->tie_broken, false};
    }
    borda.push_back({std::move(totals), std::move(models), selection});
  }

  const auto report = build_stats(runs, scores, borda, pairs, subsets);
  const auto text = render_text(report);
  write_text(config.out_dir / stage_files::kReport, text);
  write_csv_reports(report, config.out_dir);
  out << text;
  return kExitOk;
}

}  // namespace

std::string export_file_name(double fraction) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "preferences_%g.jsonl", fraction * 100.0);
  return buffer;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks) {
  CLI::App app{"Curates preference datasets from repeated LLM-judge rankings."};
  app.require_subcommand(1, 1);

  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON config file (flat keys named like the flags)");

  std::map<std::string, std::optional<std::string>> scalar_values;
  std::map<std::string, std::vector<std::string>> list_values;
  std::map<std::string, bool> flag_values;
  for (const auto& field : config_fields()) {
    const std::string flag = "--" + field.name;
    switch (field.kind) {
      case ConfigField::Kind::kScalar:
        app.add_option(flag, scalar_values[field.name], field.help);
        break;
      case ConfigField::Kind::kList:
        app.add_option(flag, list_values[field.name], field.help)
            ->expected(1)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        break;
      case ConfigField::Kind::kFlag:
        app.add_flag(flag, flag_values[field.name], field.help);
        break;
    }
  }

  struct Stage {
    const char* name;
    const char* help;
  };
  const Stage stages[] = {
      {"sample", "stratified sample of prompts per language"},
      {"build-evals", "drop incomplete response sets and build randomized evaluation requests"},
      {"evaluate", "submit evaluation requests to the evaluator endpoint"},
      {"simulate", "judge evaluation requests with the simulated noisy judge"},
      {"score", "Kendall's W, Borda totals and chosen/rejected pairs per prompt"},
      {"filter", "consistency-ordered percentile subsets"},
      {"export", "write preference files for every subset"},
      {"stats", "per-model Borda, selection counts, unanimity and language tables"},
  };
  for (const auto& stage : stages) {
    app.add_subcommand(stage.name, stage.help)->fallthrough();
  }

  std::vector<const char*> argv;
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig config;
    if (config_path) {
      apply_config_file(config, *config_path);
    }
    apply_environment(config, hooks.env);
    for (const auto& field : config_fields()) {
      switch (field.kind) {
        case ConfigField::Kind::kScalar:
          if (const auto& value = scalar_values[field.name]) {
            field.set(config, *value);
          }
          break;
        case ConfigField::Kind::kList:
          if (const auto& values = list_values[field.name]; !values.empty()) {
            field.reset_list(config);
            for (const auto& value : values) {
              field.set(config, value);
            }
          }
          break;
        case ConfigField::Kind::kFlag:
          if (flag_values[field.name]) {
            field.set(config, "true");
          }
          break;
      }
    }
    config.validate();

    const std::string stage = app.get_subcommands().front()->get_name();
    if (stage == "sample") return stage_sample(config, out);
    if (stage == "build-evals") return stage_build(config, out, err);
    if (stage == "evaluate") return stage_evaluate(config, hooks, out, err);
    if (stage == "simulate") return stage_simulate(config, out);
    if (stage == "score") return stage_score(config, out, err);
    if (stage == "filter") return stage_filter(config, out);
    if (stage == "export") return stage_export(config, out);
    if (stage == "stats") return stage_stats(config, out);
    err << "error: unknown stage " << stage << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingInputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const MissingPairError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace reprank
