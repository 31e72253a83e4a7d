#include "reprank/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "reprank/records.hpp"

namespace reprank {
namespace {

std::string fixed(double value, int precision) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

std::string lpad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) {
    return text;
  }
  std::string out = "\"";
  for (char c : text) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  return out + "\"";
}

}  // namespace

std::string fraction_label(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g%%", fraction * 100.0);
  return buffer;
}

StatsReport build_stats(const std::vector<EvaluationRun>& runs,
                        const std::vector<ConsistencyScore>& scores,
                        const std::vector<PromptBorda>& borda,
                        const std::vector<PreferencePair>& pairs,
                        const std::vector<Subset>& subsets) {
  StatsReport report;
  for (const auto& run : runs) {
    switch (run.outcome.kind) {
      case OutcomeKind::kParsed:
        ++report.parsed_runs;
        break;
      case OutcomeKind::kParseFailure:
        ++report.parse_failures;
        break;
      case OutcomeKind::kTransportFailure:
        ++report.transport_failures;
        break;
    }
  }

  report.models = per_model_borda_report(borda);

  report.scored_prompts = scores.size();
  for (const auto& score : scores) {
    report.unanimous_top += score.top_agreement == score.judges ? 1 : 0;
    report.unanimous_bottom += score.bottom_agreement == score.judges ? 1 : 0;
  }
  if (!scores.empty()) {
    const auto total = static_cast<double>(scores.size());
    report.unanimous_top_fraction = static_cast<double>(report.unanimous_top) / total;
    report.unanimous_bottom_fraction = static_cast<double>(report.unanimous_bottom) / total;
  }

  std::map<std::string, std::string> language_of;
  for (const auto& pair : pairs) {
    language_of[pair.prompt_id] = pair.language;
  }
  std::map<std::string, std::vector<std::size_t>> counts;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    report.subsets.push_back(subsets[s].fraction);
    for (const auto& id : subsets[s].prompt_ids) {
      auto it = language_of.find(id);
      const std::string language = it == language_of.end() ? "unknown" : it->second;
      auto& row = counts[language];
      row.resize(subsets.size(), 0);
      ++row[s];
    }
  }
  for (auto& [language, row] : counts) {
    row.resize(subsets.size(), 0);
    report.languages.push_back({language, row});
  }
  // Largest first-subset count first, as in a per-language breakdown table.
  std::stable_sort(report.languages.begin(), report.languages.end(),
                   [](const LanguageRow& a, const LanguageRow& b) {
                     return !a.counts.empty() && !b.counts.empty() && a.counts[0] > b.counts[0];
                   });
  return report;
}

std::string render_text(const StatsReport& report) {
  std::ostringstream out;
  out << "Evaluation runs\n";
  out << "  parsed             " << report.parsed_runs << "\n";
  out << "  parse failures     " << report.parse_failures << "\n";
  out << "  transport failures " << report.transport_failures << "\n\n";

  out << "Borda count per model\n";
  out << "  " << pad("model", 28) << lpad("mean", 10) << lpad("prompts", 9) << lpad("chosen", 8)
      << lpad("rejected", 10) << "\n";
  for (const auto& row : report.models) {
    out << "  " << pad(row.model, 28) << lpad(fixed(row.mean_total, 2), 10)
        << lpad(std::to_string(row.prompts), 9) << lpad(std::to_string(row.chosen), 8)
        << lpad(std::to_string(row.rejected), 10) << "\n";
  }
  out << "\n";

  out << "Unanimity over " << report.scored_prompts << " scored prompts\n";
  out << "  top ranked first in every evaluation   " << report.unanimous_top << " ("
      << fixed(100.0 * report.unanimous_top_fraction, 1) << "%)\n";
  out << "  bottom ranked last in every evaluation " << report.unanimous_bottom << " ("
      << fixed(100.0 * report.unanimous_bottom_fraction, 1) << "%)\n\n";

  out << "Prompts per language and subset\n";
  out << "  " << pad("language", 16);
  for (double fraction : report.subsets) {
    out << lpad(fraction_label(fraction), 8);
  }
  out << "\n";
  std::vector<std::size_t> totals(report.subsets.size(), 0);
  for (const auto& row : report.languages) {
    out << "  " << pad(row.language, 16);
    for (std::size_t i = 0; i < row.counts.size(); ++i) {
      out << lpad(std::to_string(row.counts[i]), 8);
      totals[i] += row.counts[i];
    }
    out << "\n";
  }
  out << "  " << pad("total", 16);
  for (auto total : totals) {
    out << lpad(std::to_string(total), 8);
  }
  out << "\n";
  return out.str();
}

void write_csv_reports(const StatsReport& report, const std::filesystem::path& dir) {
  {
    std::ostringstream csv;
    csv << "model,mean_borda,prompts,chosen,rejected\n";
    for (const auto& row : report.models) {
      csv << csv_field(row.model) << ',' << fixed(row.mean_total, 6) << ',' << row.prompts << ','
          << row.chosen << ',' << row.rejected << '\n';
    }
    write_text(dir / "borda_by_model.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "extremum,unanimous,prompts,fraction\n";
    csv << "top," << report.unanimous_top << ',' << report.scored_prompts << ','
        << fixed(report.unanimous_top_fraction, 6) << '\n';
    csv << "bottom," << report.unanimous_bottom << ',' << report.scored_prompts << ','
        << fixed(report.unanimous_bottom_fraction, 6) << '\n';
    write_text(dir / "unanimity.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "language";
    for (double fraction : report.subsets) {
      csv << ',' << fraction_label(fraction);
    }
    csv << '\n';
    for (const auto& row : report.languages) {
      csv << csv_field(row.language);
      for (auto count : row.counts) {
        csv << ',' << count;
      }
      csv << '\n';
    }
    write_text(dir / "language_counts.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "outcome,runs\n";
    csv << "parsed," << report.parsed_runs << '\n';
    csv << "parse_failure," << report.parse_failures << '\n';
    csv << "transport_failure," << report.transport_failures << '\n';
    write_text(dir / "run_outcomes.csv", csv.str());
  }
}

}  // namespace reprank
