#pragma once

#include <span>
#include <string>
#include <vector>

#include "jurisrank/corpus.hpp"

namespace jurisrank {

struct Distribution {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;

  static Distribution of(std::vector<double> values);
};

struct CorpusStats {
  std::size_t judgments = 0;
  std::size_t pairs = 0;
  std::size_t unique_queries = 0;
  std::size_t cited_judgments = 0;
  Distribution paragraphs_per_judgment;
  Distribution relevant_percent;        // 100 * |relevant| / n per pair
  Distribution query_tokens;            // per unique query
  Distribution paragraph_tokens;        // per paragraph of every judgment
};

/// Corpus and dataset statistics, using the retrieval tokenizer for lengths.
/// Throws UnknownJudgment if a pair names a judgment outside the corpus.
CorpusStats corpus_stats(const Corpus& corpus, std::span<const DatasetEntry> dataset);

std::string stats_to_json(const CorpusStats& stats);

}  // namespace jurisrank
