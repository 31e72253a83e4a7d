// Monte-Carlo reference for the filtering-effect acceptance check.
//
// Simulates the noisy judge and the scoring rules from scratch (own RNG, own
// Borda and selection, definitional W) and reports, over independent
// replicate seeds, the unanimous-top rate and the margin by which the top-50%
// W subset picks the latent-best response more often than the full set.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <vector>

#include "../oracles.hpp"

namespace {

struct Params {
  int prompts = 2000;
  int reps = 5;
  int models = 7;
  double gap = 0.25;
  double spread = 0.5;
  double noise = 1.0;
  double tie = 0.0;
  double keep = 0.5;
};

struct Replicate {
  double unanimous_top = 0.0;
  double full_rate = 0.0;
  double subset_rate = 0.0;
  double margin() const { return subset_rate - full_rate; }
};

struct PromptOutcome {
  double w;
  bool best_chosen;
};

Replicate simulate(const Params& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<PromptOutcome> outcomes;
  int unanimous = 0;
  int scored = 0;
  const int n = p.models;
  for (int prompt = 0; prompt < p.prompts; ++prompt) {
    std::vector<double> latent(n);
    for (int i = 0; i < n; ++i) latent[i] = p.gap * (n - 1 - i) + p.spread * normal(rng);
    const int best = static_cast<int>(std::max_element(latent.begin(), latent.end()) - latent.begin());

    std::vector<std::vector<double>> rows;
    std::vector<int> untied_first;
    for (int r = 0; r < p.reps; ++r) {
      std::vector<double> score(n);
      for (int i = 0; i < n; ++i) score[i] = latent[i] + p.noise * normal(rng);
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
      // Chain neighbours within the threshold into tie groups.
      std::vector<double> rank(n);
      int start = 0;
      for (int k = 1; k <= n; ++k) {
        if (k == n || score[order[k - 1]] - score[order[k]] > p.tie) {
          const double mean = (start + 1 + k) / 2.0;
          for (int j = start; j < k; ++j) rank[order[j]] = mean;
          start = k;
        }
      }
      untied_first.push_back(rank[order[0]] == 1.0 ? order[0] : -1);
      rows.push_back(rank);
    }

    const double w = reprank::oracle::definitional_w(rows);
    if (std::isnan(w)) continue;
    std::vector<double> points(n, 0.0);
    for (const auto& row : rows) {
      for (int i = 0; i < n; ++i) points[i] += n + 1 - row[i];
    }
    const double top = *std::max_element(points.begin(), points.end());
    const double bottom = *std::min_element(points.begin(), points.end());
    if (top == bottom) continue;
    std::vector<int> leaders;
    for (int i = 0; i < n; ++i) {
      if (points[i] == top) leaders.push_back(i);
    }
    const int chosen = leaders[std::uniform_int_distribution<std::size_t>(0, leaders.size() - 1)(rng)];

    ++scored;
    const bool same_top = untied_first[0] >= 0 &&
                          std::all_of(untied_first.begin(), untied_first.end(),
                                      [&](int t) { return t == untied_first[0]; });
    unanimous += same_top;
    outcomes.push_back({w, chosen == best});
  }

  Replicate out;
  out.unanimous_top = static_cast<double>(unanimous) / scored;
  auto rate = [](const std::vector<PromptOutcome>& v, std::size_t count) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < count; ++i) hits += v[i].best_chosen;
    return static_cast<double>(hits) / static_cast<double>(count);
  };
  out.full_rate = rate(outcomes, outcomes.size());
  // Prompts are exchangeable, so equal-W ties keep their (random) order.
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const PromptOutcome& a, const PromptOutcome& b) { return a.w > b.w; });
  const auto kept = static_cast<std::size_t>(std::ceil(p.keep * outcomes.size() - 1e-9));
  out.subset_rate = rate(outcomes, kept);
  return out;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1));
}

}  // namespace

int main(int argc, char** argv) {
  Params p;
  int replicates = 200;
  std::uint64_t seed = 1;
  std::string out_path;
  CLI::App app{"filtering-effect reference simulation"};
  app.add_option("--prompts", p.prompts);
  app.add_option("--reps", p.reps);
  app.add_option("--models", p.models);
  app.add_option("--gap", p.gap, "spacing between mean model qualities");
  app.add_option("--spread", p.spread, "per-prompt quality jitter sd");
  app.add_option("--noise", p.noise, "judge noise sd");
  app.add_option("--tie", p.tie, "tie threshold");
  app.add_option("--keep", p.keep, "subset fraction");
  app.add_option("--replicates", replicates);
  app.add_option("--seed", seed);
  app.add_option("--out", out_path, "write the summary as JSON");
  CLI11_PARSE(app, argc, argv);

  std::vector<double> unanimous, full, subset, margin;
  for (int r = 0; r < replicates; ++r) {
    const auto rep = simulate(p, seed * 1000003ULL + static_cast<std::uint64_t>(r));
    unanimous.push_back(rep.unanimous_top);
    full.push_back(rep.full_rate);
    subset.push_back(rep.subset_rate);
    margin.push_back(rep.margin());
  }

  nlohmann::json summary = {
      {"params",
       {{"prompts", p.prompts}, {"repetitions", p.reps}, {"models", p.models}, {"gap", p.gap},
        {"prompt_spread", p.spread}, {"noise_scale", p.noise}, {"tie_threshold", p.tie}, {"keep", p.keep}}},
      {"replicates", replicates},
      {"seed", seed},
      {"unanimous_top", {{"mean", mean_of(unanimous)}, {"sd", sd_of(unanimous)}}},
      {"full_rate", {{"mean", mean_of(full)}, {"sd", sd_of(full)}}},
      {"subset_rate", {{"mean", mean_of(subset)}, {"sd", sd_of(subset)}}},
      // sd is the Monte-Carlo error of a single run; se is the error of the mean.
      {"margin", {{"mean", mean_of(margin)}, {"sd", sd_of(margin)}, {"se", sd_of(margin) / std::sqrt(replicates)}}},
  };
  std::cout << summary.dump(2) << "\n";
  if (!out_path.empty()) {
    std::ofstream(out_path) << summary.dump(2) << "\n";
  }
  return 0;
}
