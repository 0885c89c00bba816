#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jurisrank/corpus.hpp"

namespace jurisrank {

enum class Split {
  kTrain,
  kVal,
  kTestSeenSeen,        // seen guide, seen query, new judgment
  kTestSeenUnseen,      // seen guide, unseen query
  kTestUnseenArticle,   // guide never seen in training
};

inline constexpr Split kAllSplits[] = {Split::kTrain, Split::kVal, Split::kTestSeenSeen,
                                       Split::kTestSeenUnseen, Split::kTestUnseenArticle};

std::string_view to_string(Split split);
std::optional<Split> split_from_string(std::string_view name);

/// Explicit guide ids, or a fraction of guides sampled with the seed.
using GuideHoldout = std::variant<std::set<std::string>, double>;

struct SplitConfig {
  GuideHoldout guide_holdout = std::set<std::string>{};
  double query_holdout = 0.0;
  double train = 0.74;
  double val = 0.10;
  double test = 0.16;
  std::uint64_t seed = 13;
};

/// Identifier of the generator and sampling procedure, stored with every
/// assignment so a file can be regenerated exactly.
inline constexpr std::string_view kSplitAlgorithm = "mt19937_64/fisher-yates/reserve-one-train-v1";

struct SplitAssignment {
  std::map<std::string, Split> assignment;  // pair key -> split
  std::uint64_t seed = 0;
  SplitConfig config;

  std::size_t count(Split split) const;
};

/// Pair-level view of a dataset needed for splitting.
struct SplitItem {
  std::string key;  // pair_key(query_id, judgment_id)
  std::string query_id;
  std::string guide_id;
};

std::vector<SplitItem> split_items(std::span<const DatasetEntry> dataset);

/// Partitions pairs into the five splits. Held-out guides go wholly to
/// test_unseen_article; a seeded sample of the remaining queries goes wholly
/// to test_seen_unseen; the rest is split pair-wise into train/val/
/// test_seen_seen so that every query outside train also has a train pair.
/// The result depends only on the set of items and the config, never on
/// their order. Throws ConfigError on invalid fractions and InfeasibleSplit
/// when nothing would be left for training.
SplitAssignment make_splits(std::span<const SplitItem> items, const SplitConfig& config);

/// Invariant violations of `assignment` with respect to `items`; empty iff valid.
std::vector<std::string> verify_splits(const SplitAssignment& assignment,
                                       std::span<const SplitItem> items);

std::string splits_to_json(const SplitAssignment& assignment);
SplitAssignment splits_from_json(std::string_view text);
SplitAssignment read_splits(const std::filesystem::path& path);

}  // namespace jurisrank
