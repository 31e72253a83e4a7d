#include "reprank/ranking.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace reprank {

Label Label::from_char(char letter) {
  if (letter < 'A' || letter > 'Z') {
    throw std::invalid_argument(std::string("invalid label '") + letter + "'");
  }
  return Label(static_cast<std::uint8_t>(letter - 'A'));
}

Label Label::from_index(std::size_t index) {
  if (index >= kMaxLabels) {
    throw std::out_of_range("label index " + std::to_string(index) + " exceeds Z");
  }
  return Label(static_cast<std::uint8_t>(index));
}

LabelSet LabelSet::first_n(std::size_t n) {
  if (n > kMaxLabels) {
    throw std::invalid_argument("at most 26 labels are supported, got " + std::to_string(n));
  }
  LabelSet set;
  set.mask_ = n == kMaxLabels ? (1U << kMaxLabels) - 1 : (1U << n) - 1;
  return set;
}

LabelSet LabelSet::from_letters(std::string_view letters) {
  LabelSet set;
  for (char c : letters) {
    set.insert(Label::from_char(c));
  }
  return set;
}

std::size_t LabelSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<Label> LabelSet::labels() const {
  std::vector<Label> out;
  out.reserve(size());
  for (std::size_t i = 0; i < kMaxLabels; ++i) {
    if ((mask_ >> i) & 1U) {
      out.push_back(Label::from_index(i));
    }
  }
  return out;
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kMissingLabel:
      return "MissingLabel";
    case ParseErrorKind::kUnknownLabel:
      return "UnknownLabel";
    case ParseErrorKind::kDuplicateLabel:
      return "DuplicateLabel";
    case ParseErrorKind::kMalformedExpression:
      return "MalformedExpression";
  }
  return "Unknown";
}

RankingParseError::RankingParseError(ParseErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

Ranking::Ranking(std::vector<Group> groups) : groups_(std::move(groups)) {
  for (auto& group : groups_) {
    if (group.empty()) {
      throw std::invalid_argument("ranking contains an empty group");
    }
    std::sort(group.begin(), group.end());
    for (Label label : group) {
      if (labels_.contains(label)) {
        throw std::invalid_argument(std::string("label ") + label.letter() +
                                    " appears more than once");
      }
      labels_.insert(label);
    }
    size_ += group.size();
  }
}

RankVector::RankVector(LabelSet labels, const std::array<double, kMaxLabels>& ranks)
    : labels_(labels) {
  for (Label label : labels.labels()) {
    ranks_[label.index()] = ranks[label.index()];
  }
}

double RankVector::rank(Label label) const {
  if (!labels_.contains(label)) {
    throw std::out_of_range(std::string("label ") + label.letter() + " not ranked");
  }
  return ranks_[label.index()];
}

std::vector<double> RankVector::values() const {
  std::vector<double> out;
  for (Label label : labels_.labels()) {
    out.push_back(ranks_[label.index()]);
  }
  return out;
}

RankingMatrix::RankingMatrix(std::string prompt_id, std::vector<RankVector> rows)
    : prompt_id_(std::move(prompt_id)), rows_(std::move(rows)) {
  if (!rows_.empty()) {
    labels_ = rows_.front().labels();
  }
  for (const auto& row : rows_) {
    if (row.labels() != labels_) {
      throw std::invalid_argument("ranking matrix rows for prompt '" + prompt_id_ +
                                  "' do not share a label set");
    }
  }
}

namespace {

struct Token {
  enum class Kind { kLabel, kBetter, kEqual } kind;
  char letter = 0;
};

std::vector<Token> tokenize(std::string_view expr) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < expr.size(); ++i) {
    const char c = expr[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      continue;
    }
    if (c == '>') {
      tokens.push_back({Token::Kind::kBetter});
    } else if (c == '=') {
      tokens.push_back({Token::Kind::kEqual});
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      tokens.push_back({Token::Kind::kLabel, c});
    } else {
      throw RankingParseError(ParseErrorKind::kMalformedExpression,
                              "unexpected character '" + std::string(1, c) + "' at offset " +
                                  std::to_string(i));
    }
  }
  return tokens;
}

}  // namespace

Ranking parse_ranking(std::string_view expr, LabelSet expected) {
  if (expected.empty()) {
    throw std::invalid_argument("parse_ranking: expected label set is empty");
  }
  const auto tokens = tokenize(expr);
  if (tokens.empty()) {
    throw RankingParseError(ParseErrorKind::kMalformedExpression, "empty ranking expression");
  }

  // Grammar: label (op label)*
  std::vector<Ranking::Group> groups(1);
  LabelSet seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& token = tokens[i];
    const bool expect_label = i % 2 == 0;
    if (expect_label != (token.kind == Token::Kind::kLabel)) {
      throw RankingParseError(ParseErrorKind::kMalformedExpression,
                              expect_label ? "operator where a label was expected"
                                           : "two labels without an operator between them");
    }
    if (token.kind == Token::Kind::kBetter) {
      groups.emplace_back();
      continue;
    }
    if (token.kind == Token::Kind::kEqual) {
      continue;
    }
    if (token.letter < 'A' || token.letter > 'Z') {
      throw RankingParseError(ParseErrorKind::kUnknownLabel,
                              std::string("label '") + token.letter + "' is not an uppercase letter");
    }
    const Label label = Label::from_char(token.letter);
    if (!expected.contains(label)) {
      throw RankingParseError(ParseErrorKind::kUnknownLabel,
                              std::string("label ") + token.letter + " was not offered");
    }
    if (seen.contains(label)) {
      throw RankingParseError(ParseErrorKind::kDuplicateLabel,
                              std::string("label ") + token.letter + " appears more than once");
    }
    seen.insert(label);
    groups.back().push_back(label);
  }
  if (tokens.size() % 2 == 0) {
    throw RankingParseError(ParseErrorKind::kMalformedExpression, "trailing operator");
  }
  if (seen != expected) {
    std::string missing;
    for (Label label : expected.labels()) {
      if (!seen.contains(label)) {
        missing += label.letter();
      }
    }
    throw RankingParseError(ParseErrorKind::kMissingLabel, "labels not ranked: " + missing);
  }
  return Ranking(std::move(groups));
}

std::string format_ranking(const Ranking& ranking) {
  std::string out;
  for (std::size_t g = 0; g < ranking.groups().size(); ++g) {
    if (g > 0) {
      out += '>';
    }
    const auto& group = ranking.groups()[g];
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (i > 0) {
        out += '=';
      }
      out += group[i].letter();
    }
  }
  return out;
}

RankVector to_rank_vector(const Ranking& ranking) {
  std::array<double, kMaxLabels> ranks{};
  std::size_t position = 1;
  for (const auto& group : ranking.groups()) {
    const std::size_t last = position + group.size() - 1;
    // Mean of position..last; exact in binary since it is a multiple of 0.5.
    const double shared = static_cast<double>(position + last) / 2.0;
    for (Label label : group) {
      ranks[label.index()] = shared;
    }
    position = last + 1;
  }
  return RankVector(ranking.labels(), ranks);
}

}  // namespace reprank
