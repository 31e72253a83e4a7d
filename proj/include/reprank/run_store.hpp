#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reprank/evaluator.hpp"

namespace reprank {

/// Append-only JSON-lines store of evaluation runs, keyed by
/// (prompt_id, repetition_index). A later record for a key supersedes an
/// earlier one. Appends are serialized and flushed line by line, so a crash
/// loses at most the line being written.
class RunStore {
 public:
  using Key = std::pair<std::string, std::size_t>;

  /// Loads existing records (if the file exists) and opens it for appending.
  explicit RunStore(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  std::optional<EvaluationRun> find(const Key& key) const;

  /// A run is complete once it produced judge output; transport failures are
  /// resubmitted on the next batch.
  bool is_complete(const Key& key) const;

  void append(const EvaluationRun& run);

  /// Latest run per key, ordered by key.
  std::vector<EvaluationRun> runs() const;

  /// Number of records appended by this instance.
  std::size_t appended() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<Key, EvaluationRun> latest_;
  std::ofstream out_;
  std::size_t appended_ = 0;
};

/// Reads a run store without opening it for writing.
std::vector<EvaluationRun> load_runs(const std::filesystem::path& path);

}  // namespace reprank
