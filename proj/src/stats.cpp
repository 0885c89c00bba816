#include "jurisrank/stats.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "jurisrank/jsonl.hpp"
#include "jurisrank/tokenizer.hpp"

namespace jurisrank {

Distribution Distribution::of(std::vector<double> values) {
  Distribution d;
  d.count = values.size();
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  d.min = values.front();
  d.max = values.back();
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const std::size_t mid = values.size() / 2;
  d.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
  return d;
}

CorpusStats corpus_stats(const Corpus& corpus, std::span<const DatasetEntry> dataset) {
  CorpusStats s;
  s.judgments = corpus.size();
  s.pairs = dataset.size();

  std::vector<double> paragraph_counts;
  std::vector<double> paragraph_tokens;
  for (const auto& j : corpus.judgments()) {
    paragraph_counts.push_back(static_cast<double>(j.size()));
    for (const auto& p : j.paragraphs) {
      paragraph_tokens.push_back(static_cast<double>(tokenize(p.text).size()));
    }
  }

  std::vector<double> relevant_percent;
  std::set<std::string> queries;
  std::set<std::string> cited;
  std::vector<double> query_tokens;
  for (const auto& e : dataset) {
    const Judgment& j = corpus.at(e.pair.judgment_id);
    relevant_percent.push_back(100.0 * static_cast<double>(e.pair.relevant.size()) /
                               static_cast<double>(j.size()));
    cited.insert(j.judgment_id);
    if (queries.insert(e.query.query_id).second) {
      query_tokens.push_back(static_cast<double>(tokenize(e.query.query_text).size()));
    }
  }
  s.unique_queries = queries.size();
  s.cited_judgments = cited.size();
  s.paragraphs_per_judgment = Distribution::of(std::move(paragraph_counts));
  s.relevant_percent = Distribution::of(std::move(relevant_percent));
  s.query_tokens = Distribution::of(std::move(query_tokens));
  s.paragraph_tokens = Distribution::of(std::move(paragraph_tokens));
  return s;
}

namespace {

json to_json_value(const Distribution& d) {
  return {{"count", d.count}, {"min", d.min}, {"max", d.max}, {"mean", d.mean}, {"median", d.median}};
}

}  // namespace

std::string stats_to_json(const CorpusStats& s) {
  const json j = {{"judgments", s.judgments},
                  {"pairs", s.pairs},
                  {"unique_queries", s.unique_queries},
                  {"cited_judgments", s.cited_judgments},
                  {"paragraphs_per_judgment", to_json_value(s.paragraphs_per_judgment)},
                  {"relevant_percent", to_json_value(s.relevant_percent)},
                  {"query_tokens", to_json_value(s.query_tokens)},
                  {"paragraph_tokens", to_json_value(s.paragraph_tokens)}};
  return j.dump(2) + "\n";
}

}  // namespace jurisrank
