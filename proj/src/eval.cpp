#include "jurisrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "jurisrank/errors.hpp"
#include "jurisrank/jsonl.hpp"

namespace jurisrank {

std::size_t cutoff_count(std::size_t n, double k_percent) {
  if (n == 0) return 0;
  // The epsilon keeps exact products such as 10% of 30 from rounding up.
  const double raw = std::ceil(k_percent / 100.0 * static_cast<double>(n) - 1e-9);
  const auto m = static_cast<std::size_t>(std::max(1.0, raw));
  return std::min(m, n);
}

double recall_at_percent(std::span<const int> order, const std::set<int>& relevant,
                         double k_percent) {
  if (relevant.empty()) throw UndefinedMetric("recall of an empty relevant set");
  const std::size_t m = cutoff_count(order.size(), k_percent);
  const auto hits = std::count_if(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                                  [&](int num) { return relevant.contains(num); });
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

ResultsTable evaluate_run(std::span<const Ranking> rankings, std::span<const DatasetEntry> dataset,
                          const SplitAssignment& assignment, const EvalOptions& options,
                          RunInfo run) {
  std::unordered_map<std::string, const Ranking*> by_key;
  for (const auto& r : rankings) {
    if (!by_key.emplace(r.key(), &r).second) throw ParseError("two rankings for " + r.key());
  }
  std::vector<const DatasetEntry*> entries;
  for (const auto& e : dataset) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(),
            [](const DatasetEntry* a, const DatasetEntry* b) { return a->key() < b->key(); });

  ResultsTable table;
  table.run = std::move(run);
  table.ks = options.ks;
  table.macro_by_query = options.macro_by_query;
  for (Split split : options.splits) {
    // Per-query accumulators; in instance mode every pair is its own group.
    std::map<std::string, std::vector<std::vector<double>>> groups;
    std::size_t count = 0;
    for (const auto* e : entries) {
      auto it = assignment.assignment.find(e->key());
      if (it == assignment.assignment.end() || it->second != split) continue;
      auto r = by_key.find(e->key());
      if (r == by_key.end()) throw MissingRanking("no ranking for pair " + e->key());
      const std::set<int> relevant(e->pair.relevant.begin(), e->pair.relevant.end());
      const auto order = r->second->order();
      std::vector<double> recalls;
      for (double k : options.ks) recalls.push_back(recall_at_percent(order, relevant, k));
      groups[options.macro_by_query ? e->pair.query_id : e->key()].push_back(std::move(recalls));
      ++count;
    }
    table.counts[split] = count;
    if (count == 0) continue;
    auto& row = table.mean_recall[split];
    for (std::size_t ki = 0; ki < options.ks.size(); ++ki) {
      double total = 0.0;
      for (const auto& [group, members] : groups) {
        double sum = 0.0;
        for (const auto& recalls : members) sum += recalls[ki];
        total += sum / static_cast<double>(members.size());
      }
      row[options.ks[ki]] = total / static_cast<double>(groups.size());
    }
  }
  return table;
}

namespace {

std::string k_label(double k) {
  if (k == std::floor(k) && std::abs(k) < 1e15) return std::to_string(static_cast<long long>(k));
  std::ostringstream ss;
  ss << k;
  return ss.str();
}

}  // namespace

std::string results_to_json(const ResultsTable& table) {
  json ks = json::array();
  for (double k : table.ks) ks.push_back(k);
  json tables = json::object();
  for (const auto& [split, row] : table.mean_recall) {
    json cells = json::object();
    for (const auto& [k, mean] : row) cells[k_label(k)] = mean;
    tables[std::string(to_string(split))] = std::move(cells);
  }
  json counts = json::object();
  for (const auto& [split, n] : table.counts) counts[std::string(to_string(split))] = n;
  const json j = {{"run",
                   {{"method", table.run.method},
                    {"config_hash", table.run.config_hash},
                    {"seed", table.run.seed},
                    {"ks", ks},
                    {"averaging", table.macro_by_query ? "query" : "instance"}}},
                  {"tables", std::move(tables)},
                  {"counts", std::move(counts)}};
  return j.dump(2) + "\n";
}

}  // namespace jurisrank
