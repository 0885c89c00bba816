#include "jurisrank/retrieval.hpp"

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>

#include "jurisrank/errors.hpp"
#include "jurisrank/parallel.hpp"
#include "jurisrank/ranking.hpp"
#include "jurisrank/scoring.hpp"

namespace jurisrank {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("JURISRANK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kBm25:
      return "bm25";
    case Method::kDot:
      return "dot";
    case Method::kMaxSim:
      return "maxsim";
    case Method::kExternal:
      return "external";
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) {
  for (Method m : {Method::kBm25, Method::kDot, Method::kMaxSim, Method::kExternal}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

void check_options(const ScoringOptions& options) {
  switch (options.method) {
    case Method::kBm25:
      options.bm25.validate();
      break;
    case Method::kDot:
      if (!options.embeddings) throw ConfigError("method dot needs an embedding store");
      if (options.embeddings->granularity() != Granularity::kSingle) {
        throw ConfigError("method dot needs single-vector embeddings");
      }
      break;
    case Method::kMaxSim:
      if (!options.embeddings) throw ConfigError("method maxsim needs an embedding store");
      if (options.embeddings->granularity() != Granularity::kToken) {
        throw ConfigError("method maxsim needs token-level embeddings");
      }
      break;
    case Method::kExternal:
      if (!options.external) throw ConfigError("method external needs a scores file");
      break;
  }
}

Eigen::VectorXd embedding_scores(const DatasetEntry& entry, const Judgment& judgment,
                                 const ScoringOptions& options) {
  const auto& store = *options.embeddings;
  const Eigen::MatrixXd query = store.rows(query_key(entry.query.query_id)).cast<double>();
  Eigen::VectorXd scores(static_cast<Eigen::Index>(judgment.size()));
  for (std::size_t i = 0; i < judgment.size(); ++i) {
    const Eigen::MatrixXd para =
        store.rows(paragraph_key(judgment.judgment_id, judgment.paragraphs[i].num)).cast<double>();
    scores[static_cast<Eigen::Index>(i)] = options.method == Method::kDot
                                               ? dot_score(query, para)
                                               : maxsim_score(query, para, options.maxsim_normalize);
  }
  return scores;
}

Eigen::VectorXd external_scores(const DatasetEntry& entry, const Judgment& judgment,
                                const ScoringOptions& options) {
  const auto scores = pair_scores(*options.external, entry.query.query_id, judgment.judgment_id);
  Eigen::VectorXd out(static_cast<Eigen::Index>(judgment.size()));
  for (std::size_t i = 0; i < judgment.size(); ++i) {
    auto it = scores.find(judgment.paragraphs[i].num);
    if (it == scores.end()) {
      throw IncompleteScores("no external score for paragraph " +
                             std::to_string(judgment.paragraphs[i].num) + " of " + entry.key());
    }
    out[static_cast<Eigen::Index>(i)] = it->second;
  }
  if (scores.size() != judgment.size()) {
    throw ParseError("external scores name paragraphs outside judgment " + judgment.judgment_id);
  }
  return out;
}

Ranking score_with_index(const DatasetEntry& entry, const Judgment& judgment,
                         const TermIndex* index, const ScoringOptions& options) {
  if (entry.pair.judgment_id != judgment.judgment_id) {
    throw IdentityMismatch("entry " + entry.key() + " scored against " + judgment.judgment_id);
  }
  Eigen::VectorXd scores;
  switch (options.method) {
    case Method::kBm25:
      scores = bm25_score(entry.query.query_text, *index, options.bm25);
      break;
    case Method::kDot:
    case Method::kMaxSim:
      scores = embedding_scores(entry, judgment, options);
      break;
    case Method::kExternal:
      scores = external_scores(entry, judgment, options);
      break;
  }
  return rank_paragraphs(entry.query.query_id, judgment.judgment_id, judgment.paragraph_nums(),
                         scores);
}

}  // namespace

Ranking score_pair(const DatasetEntry& entry, const Judgment& judgment,
                   const ScoringOptions& options) {
  check_options(options);
  std::unique_ptr<TermIndex> index;
  if (options.method == Method::kBm25) {
    index = std::make_unique<TermIndex>(TermIndex::build(judgment));
  }
  return score_with_index(entry, judgment, index.get(), options);
}

std::vector<Ranking> score_all(std::span<const DatasetEntry> entries, const Corpus& corpus,
                               const ScoringOptions& options) {
  check_options(options);
  std::map<std::string, TermIndex> indexes;
  if (options.method == Method::kBm25) {
    for (const auto& e : entries) {
      if (!indexes.contains(e.pair.judgment_id)) {
        indexes.emplace(e.pair.judgment_id, TermIndex::build(corpus.at(e.pair.judgment_id)));
      }
    }
  }
  std::vector<Ranking> out(entries.size());
  parallel_for(entries.size(), resolve_threads(options.threads), [&](std::size_t i) {
    const auto& e = entries[i];
    const auto it = indexes.find(e.pair.judgment_id);
    out[i] = score_with_index(e, corpus.at(e.pair.judgment_id),
                              it == indexes.end() ? nullptr : &it->second, options);
  });
  return out;
}

}  // namespace jurisrank
