#include "reprank/run_store.hpp"

#include <filesystem>
#include <fstream>

#include "reprank/errors.hpp"
#include "reprank/records.hpp"

namespace reprank {
namespace {

std::map<RunStore::Key, EvaluationRun> read_latest(const std::filesystem::path& path) {
  std::map<RunStore::Key, EvaluationRun> latest;
  const auto records = read_jsonl(path, /*tolerate_truncated_tail=*/true);
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      auto run = run_from_json(records[i]);
      RunStore::Key key{run.request.prompt_id, run.request.repetition_index};
      latest.insert_or_assign(std::move(key), std::move(run));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ": record " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return latest;
}

// Length of the file up to and including its last newline.
std::uintmax_t complete_prefix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uintmax_t end = 0;
  std::uintmax_t pos = 0;
  for (char c; in.get(c); ++pos) {
    if (c == '\n') {
      end = pos + 1;
    }
  }
  return end;
}

}  // namespace

RunStore::RunStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    latest_ = read_latest(path_);
    // Drop a line cut short by an interrupted write so appends start clean.
    const auto keep = complete_prefix(path_);
    if (keep != std::filesystem::file_size(path_)) {
      std::filesystem::resize_file(path_, keep);
    }
  } else if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) {
    throw IoError("cannot open run store " + path_.string() + " for appending");
  }
}

std::optional<EvaluationRun> RunStore::find(const Key& key) const {
  std::lock_guard lock(mutex_);
  auto it = latest_.find(key);
  if (it == latest_.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool RunStore::is_complete(const Key& key) const {
  std::lock_guard lock(mutex_);
  auto it = latest_.find(key);
  return it != latest_.end() && it->second.outcome.kind != OutcomeKind::kTransportFailure;
}

void RunStore::append(const EvaluationRun& run) {
  const std::string line = to_json(run).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) {
    throw IoError("append to run store " + path_.string() + " failed");
  }
  latest_.insert_or_assign(Key{run.request.prompt_id, run.request.repetition_index}, run);
  ++appended_;
}

std::vector<EvaluationRun> RunStore::runs() const {
  std::lock_guard lock(mutex_);
  std::vector<EvaluationRun> out;
  out.reserve(latest_.size());
  for (const auto& [key, run] : latest_) {
    out.push_back(run);
  }
  return out;
}

std::size_t RunStore::appended() const {
  std::lock_guard lock(mutex_);
  return appended_;
}

std::vector<EvaluationRun> load_runs(const std::filesystem::path& path) {
  std::vector<EvaluationRun> out;
  for (auto& [key, run] : read_latest(path)) {
    out.push_back(std::move(run));
  }
  return out;
}

}  // namespace reprank
