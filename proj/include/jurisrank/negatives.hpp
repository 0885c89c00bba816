#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jurisrank/bm25.hpp"
#include "jurisrank/corpus.hpp"
#include "jurisrank/splits.hpp"

namespace jurisrank {

enum class NegativeSource { kRandom, kBm25, kModel };

std::string_view to_string(NegativeSource source);
std::optional<NegativeSource> negative_source_from_string(std::string_view name);

/// One query, one relevant paragraph and hard/random non-relevant
/// paragraphs drawn from the same judgment.
struct TrainingInstance {
  std::string query_id;
  std::string judgment_id;
  int positive = 0;
  std::vector<int> negatives;
  std::vector<NegativeSource> provenance;  // parallel to negatives
  bool short_of_negatives = false;

  bool operator==(const TrainingInstance&) const = default;
};

struct NegativeSpec {
  int n_random = 0;
  int n_bm25 = 0;

  int total() const noexcept { return n_random + n_bm25; }
};

/// Negative mixes used for training: dense bi-encoder (4 BM25 + 1 random)
/// and late-interaction / cross-encoder (4 random + 3 BM25).
inline constexpr NegativeSpec kDprPreset{1, 4};
inline constexpr NegativeSpec kColbertPreset{4, 3};
inline constexpr NegativeSpec kCrossPreset{4, 3};

std::optional<NegativeSpec> preset_from_string(std::string_view name);

struct NegativeSample {
  std::vector<int> negatives;
  std::vector<NegativeSource> provenance;
  bool short_of_negatives = false;

  bool operator==(const NegativeSample&) const = default;
};

/// BM25 negatives are the highest-ranked non-relevant paragraphs in rank
/// order; random negatives are a seeded uniform sample of the remaining
/// non-relevant ones. When fewer non-relevant paragraphs exist than
/// requested, BM25 slots are filled first and the sample is flagged short.
NegativeSample sample_static_negatives(const QueryJudgmentPair& pair, const Judgment& judgment,
                                       const Ranking& bm25_ranking, const NegativeSpec& spec,
                                       std::uint64_t seed);

/// The n highest-scoring non-relevant paragraphs under the model being
/// trained, ties broken by ascending paragraph number. Throws
/// IncompleteScores unless every paragraph of the judgment has a score.
NegativeSample refresh_model_negatives(const QueryJudgmentPair& pair, const Judgment& judgment,
                                       const std::map<int, double>& model_scores, int n);

/// Seed of one instance, derived from the global seed and its identity.
std::uint64_t instance_seed(std::uint64_t seed, std::string_view query_id,
                            std::string_view judgment_id, int positive);

struct ExportOptions {
  NegativeSpec spec = kDprPreset;
  Bm25Params bm25;
  std::uint64_t seed = 13;
  unsigned threads = 1;
};

/// One instance per (pair, relevant paragraph) for the pairs whose split is
/// in `splits`. Output is ordered by pair key then positive.
std::vector<TrainingInstance> export_instances(std::span<const DatasetEntry> dataset,
                                               const Corpus& corpus,
                                               const SplitAssignment& assignment,
                                               std::span<const Split> splits,
                                               const ExportOptions& options);

std::string dump_instances(std::span<const TrainingInstance> instances);
std::vector<TrainingInstance> read_instances(const std::filesystem::path& path);

}  // namespace jurisrank
