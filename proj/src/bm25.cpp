#include "jurisrank/bm25.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "jurisrank/errors.hpp"

namespace jurisrank {

void Bm25Params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1)) throw ConfigError("bm25 k1 must be non-negative");
  if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("bm25 b must lie in [0, 1]");
}

TermIndex TermIndex::build(const Judgment& judgment, const Tokenizer& tokenizer) {
  TermIndex index;
  index.tokenizer_ = tokenizer;
  const auto n = static_cast<Eigen::Index>(judgment.paragraphs.size());
  index.lengths_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& paragraph = judgment.paragraphs[static_cast<std::size_t>(i)];
    index.nums_.push_back(paragraph.num);
    const auto tokens = tokenizer(paragraph.text);
    index.lengths_[i] = static_cast<double>(std::max<std::size_t>(1, tokens.size()));
    std::map<std::string, int> counts;
    for (const auto& t : tokens) ++counts[t];
    for (auto& [term, tf] : counts) {
      index.postings_[term].push_back({static_cast<int>(i), tf});
    }
  }
  index.avgdl_ = n > 0 ? index.lengths_.mean() : 0.0;
  return index;
}

const std::vector<TermIndex::Posting>* TermIndex::postings(std::string_view term) const {
  auto it = postings_.find(std::string(term));
  return it == postings_.end() ? nullptr : &it->second;
}

int TermIndex::df(std::string_view term) const {
  const auto* p = postings(term);
  return p ? static_cast<int>(p->size()) : 0;
}

int TermIndex::tf(std::string_view term, std::size_t paragraph) const {
  if (const auto* p = postings(term)) {
    for (const auto& posting : *p) {
      if (posting.paragraph == static_cast<int>(paragraph)) return posting.tf;
    }
  }
  return 0;
}

Eigen::VectorXd bm25_score(std::string_view query_text, const TermIndex& index,
                           const Bm25Params& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(index.paragraph_count());
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);
  if (n == 0) return scores;

  // Length normalisation term k1 * (1 - b + b * |p| / avgdl) per paragraph.
  const Eigen::VectorXd norm =
      params.k1 * ((1.0 - params.b) + params.b * index.lengths().array() / index.avgdl());

  const auto terms = index.tokenizer()(query_text);
  for (const auto& term : std::set<std::string>(terms.begin(), terms.end())) {
    const auto* postings = index.postings(term);
    if (!postings) continue;
    const double idf = bm25_idf(static_cast<double>(n), static_cast<double>(postings->size()));
    for (const auto& p : *postings) {
      const double tf = p.tf;
      scores[p.paragraph] += idf * tf * (params.k1 + 1.0) / (tf + norm[p.paragraph]);
    }
  }
  return scores;
}

}  // namespace jurisrank
