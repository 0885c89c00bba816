#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jurisrank/bm25.hpp"
#include "jurisrank/corpus.hpp"
#include "jurisrank/embedding_store.hpp"
#include "jurisrank/external_scores.hpp"

namespace jurisrank {

enum class Method { kBm25, kDot, kMaxSim, kExternal };

std::string_view to_string(Method method);
std::optional<Method> method_from_string(std::string_view name);

struct ScoringOptions {
  Method method = Method::kBm25;
  Bm25Params bm25;
  bool maxsim_normalize = true;
  const EmbeddingStore* embeddings = nullptr;  // dot, maxsim
  const ExternalScores* external = nullptr;    // external
  unsigned threads = 1;
};

/// Ranks every paragraph of `judgment` for the entry's query.
Ranking score_pair(const DatasetEntry& entry, const Judgment& judgment,
                   const ScoringOptions& options);

/// Same as score_pair for many entries, reusing one term index per
/// judgment. Output order follows `entries`.
std::vector<Ranking> score_all(std::span<const DatasetEntry> entries, const Corpus& corpus,
                               const ScoringOptions& options);

}  // namespace jurisrank
