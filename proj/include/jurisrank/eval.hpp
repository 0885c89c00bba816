#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "jurisrank/corpus.hpp"
#include "jurisrank/splits.hpp"

namespace jurisrank {

/// Number of top-ranked paragraphs inspected at k percent of n:
/// max(1, ceil(k/100 * n)), capped at n.
std::size_t cutoff_count(std::size_t n, double k_percent);

/// Share of `relevant` found among the top cutoff_count(order.size(), k)
/// entries of `order`. Throws UndefinedMetric when `relevant` is empty.
double recall_at_percent(std::span<const int> order, const std::set<int>& relevant,
                         double k_percent);

inline double recall_at_percent(const Ranking& ranking, const std::set<int>& relevant,
                                double k_percent) {
  const auto order = ranking.order();
  return recall_at_percent(order, relevant, k_percent);
}

struct RunInfo {
  std::string method;
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct ResultsTable {
  RunInfo run;
  std::vector<double> ks;
  std::map<Split, std::map<double, double>> mean_recall;  // split -> k -> mean
  std::map<Split, std::size_t> counts;
  bool macro_by_query = false;
};

struct EvalOptions {
  std::vector<double> ks{2, 5, 10};
  std::vector<Split> splits{Split::kVal, Split::kTestSeenSeen, Split::kTestSeenUnseen,
                            Split::kTestUnseenArticle};
  bool macro_by_query = false;  // average per query first, then over queries
};

/// Mean Recall@k% per split over the pairs assigned to each evaluated split.
/// Throws MissingRanking naming the first pair (in key order) without one.
ResultsTable evaluate_run(std::span<const Ranking> rankings, std::span<const DatasetEntry> dataset,
                          const SplitAssignment& assignment, const EvalOptions& options = {},
                          RunInfo run = {});

std::string results_to_json(const ResultsTable& table);

}  // namespace jurisrank
