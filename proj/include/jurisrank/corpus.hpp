#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace jurisrank {

/// One court-numbered paragraph. `num` is the number printed at the start
/// of the paragraph in the judgment; `text` excludes the number marker.
struct Paragraph {
  int num = 0;
  std::string text;

  bool operator==(const Paragraph&) const = default;
};

struct Judgment {
  std::string judgment_id;
  std::string title;
  std::vector<Paragraph> paragraphs;

  bool operator==(const Judgment&) const = default;

  std::size_t size() const noexcept { return paragraphs.size(); }
  bool has_paragraph(int num) const noexcept;
  std::vector<int> paragraph_nums() const;
};

struct QueryRecord {
  std::string query_id;
  std::string guide_id;
  std::vector<std::string> path;
  std::string query_text;

  bool operator==(const QueryRecord&) const = default;
};

/// A query paired with one judgment; `relevant` is kept sorted and unique.
struct QueryJudgmentPair {
  std::string query_id;
  std::string judgment_id;
  std::vector<int> relevant;

  bool operator==(const QueryJudgmentPair&) const = default;
};

/// Key used for a pair in split files and rankings: "<query_id>|<judgment_id>".
std::string pair_key(std::string_view query_id, std::string_view judgment_id);

/// One line of dataset.jsonl: the query plus its labelled judgment.
struct DatasetEntry {
  QueryRecord query;
  QueryJudgmentPair pair;

  bool operator==(const DatasetEntry&) const = default;

  std::string key() const { return pair_key(pair.query_id, pair.judgment_id); }
};

struct RankedParagraph {
  int num = 0;
  double score = 0.0;

  bool operator==(const RankedParagraph&) const = default;
};

/// Paragraphs of one judgment ordered by descending score for one query.
struct Ranking {
  std::string query_id;
  std::string judgment_id;
  std::vector<RankedParagraph> entries;

  bool operator==(const Ranking&) const = default;

  std::string key() const { return pair_key(query_id, judgment_id); }
  std::vector<int> order() const;
};

/// Judgments indexed by id. Ids are opaque strings compared exactly.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Judgment> judgments);

  const Judgment& at(std::string_view judgment_id) const;
  const Judgment* find(std::string_view judgment_id) const;
  bool contains(std::string_view judgment_id) const {
    return find(judgment_id) != nullptr;
  }

  std::span<const Judgment> judgments() const noexcept { return judgments_; }
  std::size_t size() const noexcept { return judgments_.size(); }

 private:
  std::vector<Judgment> judgments_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Invariant violations of a single judgment (empty when valid).
std::vector<std::string> validate_judgment(const Judgment& judgment);

/// Invariant violations of `pair` against its judgment; empty when valid.
/// Throws IdentityMismatch if the judgment ids differ.
std::vector<std::string> validate_pair(const QueryJudgmentPair& pair,
                                       const Judgment& judgment);

/// Sorts and deduplicates in place.
void normalize_relevant(std::vector<int>& relevant);

}  // namespace jurisrank
