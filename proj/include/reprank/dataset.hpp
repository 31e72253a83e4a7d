#pragma once

#include <string>
#include <vector>

namespace reprank {

struct PromptRecord {
  std::string prompt_id;
  /// BCP-47-style language tag.
  std::string language;
  std::string text;
  std::string source;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

struct ResponseEntry {
  std::string model_id;
  std::string text;
  /// False when generation stopped at the token limit.
  bool complete = true;

  friend bool operator==(const ResponseEntry&, const ResponseEntry&) = default;
};

struct ResponseSet {
  std::string prompt_id;
  std::vector<ResponseEntry> entries;

  friend bool operator==(const ResponseSet&, const ResponseSet&) = default;
};

}  // namespace reprank
