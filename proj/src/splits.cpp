#include "jurisrank/splits.hpp"

#include <algorithm>
#include <cmath>

#include "jurisrank/errors.hpp"
#include "jurisrank/jsonl.hpp"
#include "jurisrank/random.hpp"

namespace jurisrank {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kVal:
      return "val";
    case Split::kTestSeenSeen:
      return "test_seen_seen";
    case Split::kTestSeenUnseen:
      return "test_seen_unseen";
    case Split::kTestUnseenArticle:
      return "test_unseen_article";
  }
  return "unknown";
}

std::optional<Split> split_from_string(std::string_view name) {
  for (Split s : kAllSplits) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::size_t SplitAssignment::count(Split split) const {
  return static_cast<std::size_t>(std::count_if(
      assignment.begin(), assignment.end(), [split](const auto& kv) { return kv.second == split; }));
}

std::vector<SplitItem> split_items(std::span<const DatasetEntry> dataset) {
  std::vector<SplitItem> out;
  out.reserve(dataset.size());
  for (const auto& e : dataset) out.push_back({e.key(), e.query.query_id, e.query.guide_id});
  return out;
}

namespace {

void check_fraction(std::string_view name, double v, double lo, double hi, bool lo_open,
                    bool hi_open) {
  const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
  if (!ok) throw ConfigError(std::string(name) + " fraction " + std::to_string(v) + " out of range");
}

std::size_t rounded_share(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SplitAssignment make_splits(std::span<const SplitItem> input, const SplitConfig& config) {
  check_fraction("query holdout", config.query_holdout, 0.0, 1.0, false, true);
  check_fraction("train", config.train, 0.0, 1.0, true, false);
  check_fraction("val", config.val, 0.0, 1.0, false, true);
  check_fraction("test", config.test, 0.0, 1.0, false, true);
  if (std::abs(config.train + config.val + config.test - 1.0) > 1e-6) {
    throw ConfigError("train/val/test fractions must sum to 1");
  }
  if (const auto* f = std::get_if<double>(&config.guide_holdout)) {
    check_fraction("guide holdout", *f, 0.0, 1.0, false, true);
  }

  std::vector<SplitItem> items(input.begin(), input.end());
  std::sort(items.begin(), items.end(),
            [](const SplitItem& a, const SplitItem& b) { return a.key < b.key; });
  std::map<std::string, std::string> guide_of_query;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && items[i].key == items[i - 1].key) {
      throw ParseError("duplicate pair " + items[i].key);
    }
    auto [it, inserted] = guide_of_query.emplace(items[i].query_id, items[i].guide_id);
    if (!inserted && it->second != items[i].guide_id) {
      throw ParseError("query " + items[i].query_id + " appears under two guides");
    }
  }

  Rng rng(config.seed);
  SplitAssignment out;
  out.seed = config.seed;
  out.config = config;

  // Guide-level holdout.
  std::vector<std::string> guides;
  for (const auto& item : items) guides.push_back(item.guide_id);
  guides = sorted_unique(std::move(guides));
  std::set<std::string> held_guides;
  if (const auto* explicit_ids = std::get_if<std::set<std::string>>(&config.guide_holdout)) {
    for (const auto& g : *explicit_ids) {
      if (!std::binary_search(guides.begin(), guides.end(), g)) {
        throw ConfigError("held-out guide '" + g + "' has no pairs in the dataset");
      }
    }
    held_guides = *explicit_ids;
  } else {
    const double fraction = std::get<double>(config.guide_holdout);
    std::size_t n = rounded_share(fraction, guides.size());
    if (fraction > 0 && n == 0) n = 1;
    std::vector<std::string> shuffled = guides;
    rng.shuffle(std::span(shuffled));
    held_guides.insert(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n));
  }

  // Query-level holdout among the seen guides.
  std::vector<std::string> seen_queries;
  for (const auto& item : items) {
    if (!held_guides.contains(item.guide_id)) seen_queries.push_back(item.query_id);
  }
  seen_queries = sorted_unique(std::move(seen_queries));
  const std::size_t n_heldout_queries = rounded_share(config.query_holdout, seen_queries.size());
  rng.shuffle(std::span(seen_queries));
  const std::set<std::string> held_queries(
      seen_queries.begin(), seen_queries.begin() + static_cast<std::ptrdiff_t>(n_heldout_queries));
  if (n_heldout_queries >= seen_queries.size()) {
    throw InfeasibleSplit("holdouts leave no queries for training");
  }

  std::map<std::string, std::vector<std::string>> seen_pairs_by_query;
  std::size_t n_seen = 0;
  for (const auto& item : items) {
    if (held_guides.contains(item.guide_id)) {
      out.assignment[item.key] = Split::kTestUnseenArticle;
    } else if (held_queries.contains(item.query_id)) {
      out.assignment[item.key] = Split::kTestSeenUnseen;
    } else {
      seen_pairs_by_query[item.query_id].push_back(item.key);
      ++n_seen;
    }
  }

  // One train pair per seen query, then fill the remaining quotas.
  std::vector<std::string> pool;
  std::size_t reserved = 0;
  for (auto& [query, keys] : seen_pairs_by_query) {
    rng.shuffle(std::span(keys));
    out.assignment[keys.front()] = Split::kTrain;
    ++reserved;
    pool.insert(pool.end(), keys.begin() + 1, keys.end());
  }
  std::sort(pool.begin(), pool.end());
  rng.shuffle(std::span(pool));
  const std::size_t target_train = rounded_share(config.train, n_seen);
  const std::size_t extra_train = target_train > reserved ? target_train - reserved : 0;
  const std::size_t target_val = rounded_share(config.val, n_seen);
  std::size_t i = 0;
  for (; i < pool.size() && i < extra_train; ++i) out.assignment[pool[i]] = Split::kTrain;
  for (std::size_t v = 0; i < pool.size() && v < target_val; ++i, ++v) {
    out.assignment[pool[i]] = Split::kVal;
  }
  for (; i < pool.size(); ++i) out.assignment[pool[i]] = Split::kTestSeenSeen;
  return out;
}

std::vector<std::string> verify_splits(const SplitAssignment& assignment,
                                       std::span<const SplitItem> items) {
  std::vector<std::string> out;
  std::set<std::string> known;
  std::map<std::string, std::set<Split>> splits_of_guide;
  std::map<std::string, std::set<Split>> splits_of_query;
  for (const auto& item : items) {
    known.insert(item.key);
    auto it = assignment.assignment.find(item.key);
    if (it == assignment.assignment.end()) {
      out.push_back("pair " + item.key + " is unassigned");
      continue;
    }
    splits_of_guide[item.guide_id].insert(it->second);
    splits_of_query[item.query_id].insert(it->second);
  }
  for (const auto& [key, split] : assignment.assignment) {
    if (!known.contains(key)) out.push_back("assignment names unknown pair " + key);
  }
  for (const auto& [guide, splits] : splits_of_guide) {
    if (splits.contains(Split::kTestUnseenArticle) && splits.size() > 1) {
      out.push_back("held-out guide " + guide + " also occurs outside test_unseen_article");
    }
  }
  for (const auto& [query, splits] : splits_of_query) {
    if (splits.contains(Split::kTestSeenUnseen) &&
        (splits.contains(Split::kTrain) || splits.contains(Split::kVal) ||
         splits.contains(Split::kTestSeenSeen))) {
      out.push_back("held-out query " + query + " leaks into train/val/test_seen_seen");
    }
    if (splits.contains(Split::kTestSeenSeen) && !splits.contains(Split::kTrain)) {
      out.push_back("seen query " + query + " in test_seen_seen has no train pair");
    }
  }
  return out;
}

std::string splits_to_json(const SplitAssignment& a) {
  json ratios = {{"query_holdout", a.config.query_holdout},
                 {"train", a.config.train},
                 {"val", a.config.val},
                 {"test", a.config.test}};
  if (const auto* ids = std::get_if<std::set<std::string>>(&a.config.guide_holdout)) {
    ratios["guide_holdout"] = *ids;
  } else {
    ratios["guide_holdout"] = std::get<double>(a.config.guide_holdout);
  }
  json assignment = json::object();
  for (const auto& [key, split] : a.assignment) assignment[key] = to_string(split);
  json j = {{"seed", a.seed},
            {"algorithm", kSplitAlgorithm},
            {"ratios", std::move(ratios)},
            {"assignment", std::move(assignment)}};
  return j.dump(2) + "\n";
}

SplitAssignment splits_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    SplitAssignment a;
    a.seed = j.at("seed").get<std::uint64_t>();
    a.config.seed = a.seed;
    if (j.contains("ratios")) {
      const auto& r = j.at("ratios");
      a.config.query_holdout = r.value("query_holdout", 0.0);
      a.config.train = r.value("train", a.config.train);
      a.config.val = r.value("val", a.config.val);
      a.config.test = r.value("test", a.config.test);
      if (r.contains("guide_holdout")) {
        const auto& g = r.at("guide_holdout");
        if (g.is_number()) {
          a.config.guide_holdout = g.get<double>();
        } else {
          a.config.guide_holdout = g.get<std::set<std::string>>();
        }
      }
    }
    for (const auto& [key, value] : j.at("assignment").items()) {
      const auto split = split_from_string(value.get<std::string>());
      if (!split) throw ParseError("unknown split '" + value.get<std::string>() + "'");
      a.assignment[key] = *split;
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("splits file: ") + e.what());
  }
}

SplitAssignment read_splits(const fs::path& path) { return splits_from_json(read_file(path)); }

}  // namespace jurisrank
