#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reprank {

inline constexpr std::size_t kMaxLabels = 26;

/// A single response label, one of the letters A..Z.
class Label {
 public:
  /// Throws std::invalid_argument unless `letter` is in A..Z.
  static Label from_char(char letter);
  /// Throws std::out_of_range unless index < 26.
  static Label from_index(std::size_t index);

  char letter() const { return static_cast<char>('A' + index_); }
  std::size_t index() const { return index_; }

  friend bool operator==(Label, Label) = default;
  friend auto operator<=>(Label, Label) = default;

 private:
  explicit Label(std::uint8_t index) : index_(index) {}
  std::uint8_t index_;
};

/// Set of labels stored as a 26-bit mask. Iteration is alphabetical.
class LabelSet {
 public:
  LabelSet() = default;

  /// The first n letters, A.. . Throws if n > 26.
  static LabelSet first_n(std::size_t n);
  static LabelSet from_letters(std::string_view letters);

  bool contains(Label label) const { return (mask_ >> label.index()) & 1U; }
  void insert(Label label) { mask_ |= (1U << label.index()); }
  std::size_t size() const;
  bool empty() const { return mask_ == 0; }
  std::uint32_t mask() const { return mask_; }
  std::vector<Label> labels() const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::uint32_t mask_ = 0;
};

enum class ParseErrorKind {
  kMissingLabel,
  kUnknownLabel,
  kDuplicateLabel,
  kMalformedExpression,
};

std::string_view to_string(ParseErrorKind kind);

class RankingParseError : public std::runtime_error {
 public:
  RankingParseError(ParseErrorKind kind, const std::string& detail);
  ParseErrorKind kind() const { return kind_; }

 private:
  ParseErrorKind kind_;
};

/// One judge's ordering: groups[0] is strictly better than groups[1], and so
/// on. Labels within a group are tied and kept sorted.
class Ranking {
 public:
  using Group = std::vector<Label>;

  /// Validates that groups are non-empty and pairwise disjoint; throws
  /// std::invalid_argument otherwise.
  explicit Ranking(std::vector<Group> groups);

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t size() const { return size_; }
  LabelSet labels() const { return labels_; }

  friend bool operator==(const Ranking& a, const Ranking& b) { return a.groups_ == b.groups_; }

 private:
  std::vector<Group> groups_;
  std::size_t size_ = 0;
  LabelSet labels_;
};

/// Fractional ranks (1 = best); tied labels share the mean of their positions.
class RankVector {
 public:
  RankVector() = default;
  RankVector(LabelSet labels, const std::array<double, kMaxLabels>& ranks);

  LabelSet labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  /// Throws std::out_of_range for a label outside labels().
  double rank(Label label) const;
  /// Ranks in alphabetical label order.
  std::vector<double> values() const;

  friend bool operator==(const RankVector&, const RankVector&) = default;

 private:
  LabelSet labels_;
  std::array<double, kMaxLabels> ranks_{};
};

/// Repeated rankings of one prompt's responses.
class RankingMatrix {
 public:
  /// Throws std::invalid_argument if rows do not share one label set.
  RankingMatrix(std::string prompt_id, std::vector<RankVector> rows);

  const std::string& prompt_id() const { return prompt_id_; }
  const std::vector<RankVector>& rows() const { return rows_; }
  LabelSet labels() const { return labels_; }
  std::size_t judges() const { return rows_.size(); }
  std::size_t objects() const { return labels_.size(); }

 private:
  std::string prompt_id_;
  std::vector<RankVector> rows_;
  LabelSet labels_;
};

/// Parses expressions such as "Z>Y>X=W>V>U=T". Whitespace around labels and
/// operators is ignored; labels are case-sensitive.
Ranking parse_ranking(std::string_view expr, LabelSet expected);

/// Canonical text: groups joined by '>', labels inside a group sorted and
/// joined by '='.
std::string format_ranking(const Ranking& ranking);

RankVector to_rank_vector(const Ranking& ranking);

}  // namespace reprank
