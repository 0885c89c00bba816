#include "jurisrank/negatives.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "jurisrank/errors.hpp"
#include "jurisrank/hash.hpp"
#include "jurisrank/jsonl.hpp"
#include "jurisrank/parallel.hpp"
#include "jurisrank/random.hpp"
#include "jurisrank/retrieval.hpp"

namespace jurisrank {

std::string_view to_string(NegativeSource source) {
  switch (source) {
    case NegativeSource::kRandom:
      return "random";
    case NegativeSource::kBm25:
      return "bm25";
    case NegativeSource::kModel:
      return "model";
  }
  return "unknown";
}

std::optional<NegativeSource> negative_source_from_string(std::string_view name) {
  for (auto s : {NegativeSource::kRandom, NegativeSource::kBm25, NegativeSource::kModel}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<NegativeSpec> preset_from_string(std::string_view name) {
  if (name == "dpr") return kDprPreset;
  if (name == "colbert") return kColbertPreset;
  if (name == "cross") return kCrossPreset;
  return std::nullopt;
}

std::uint64_t instance_seed(std::uint64_t seed, std::string_view query_id,
                            std::string_view judgment_id, int positive) {
  return Fnv1a64{}
      .update_u64(seed)
      .field(query_id)
      .field(judgment_id)
      .update_u64(static_cast<std::uint64_t>(positive))
      .value();
}

namespace {

std::vector<int> non_relevant_of(const QueryJudgmentPair& pair, const Judgment& judgment) {
  if (pair.judgment_id != judgment.judgment_id) {
    throw IdentityMismatch("pair for " + pair.judgment_id + " sampled against " +
                           judgment.judgment_id);
  }
  const std::set<int> relevant(pair.relevant.begin(), pair.relevant.end());
  std::vector<int> out;
  for (const auto& p : judgment.paragraphs) {
    if (!relevant.contains(p.num)) out.push_back(p.num);
  }
  return out;
}

}  // namespace

NegativeSample sample_static_negatives(const QueryJudgmentPair& pair, const Judgment& judgment,
                                       const Ranking& bm25_ranking, const NegativeSpec& spec,
                                       std::uint64_t seed) {
  if (spec.n_random < 0 || spec.n_bm25 < 0) throw ConfigError("negative counts must be >= 0");
  if (bm25_ranking.judgment_id != judgment.judgment_id) {
    throw IdentityMismatch("ranking for " + bm25_ranking.judgment_id + " used with " +
                           judgment.judgment_id);
  }
  const auto candidates = non_relevant_of(pair, judgment);
  std::set<int> available(candidates.begin(), candidates.end());

  NegativeSample out;
  for (const auto& entry : bm25_ranking.entries) {
    if (static_cast<int>(out.negatives.size()) == spec.n_bm25) break;
    if (!judgment.has_paragraph(entry.num)) {
      throw ParseError("ranking names paragraph " + std::to_string(entry.num) +
                       " outside judgment " + judgment.judgment_id);
    }
    if (available.erase(entry.num) == 1) {
      out.negatives.push_back(entry.num);
      out.provenance.push_back(NegativeSource::kBm25);
    }
  }

  // Partial Fisher-Yates over the remaining candidates in paragraph order.
  std::vector<int> pool(available.begin(), available.end());
  Rng rng(seed);
  const std::size_t take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(spec.n_random));
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    out.negatives.push_back(pool[i]);
    out.provenance.push_back(NegativeSource::kRandom);
  }
  out.short_of_negatives = static_cast<int>(out.negatives.size()) < spec.total();
  return out;
}

NegativeSample refresh_model_negatives(const QueryJudgmentPair& pair, const Judgment& judgment,
                                       const std::map<int, double>& model_scores, int n) {
  if (n < 0) throw ConfigError("negative count must be >= 0");
  for (const auto& p : judgment.paragraphs) {
    auto it = model_scores.find(p.num);
    if (it == model_scores.end()) {
      throw IncompleteScores("no model score for paragraph " + std::to_string(p.num) + " of " +
                             judgment.judgment_id);
    }
    if (std::isnan(it->second)) {
      throw InvalidScore("NaN model score for paragraph " + std::to_string(p.num));
    }
  }
  auto candidates = non_relevant_of(pair, judgment);
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const double sa = model_scores.at(a);
    const double sb = model_scores.at(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  NegativeSample out;
  const std::size_t take = std::min(candidates.size(), static_cast<std::size_t>(n));
  out.negatives.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
  out.provenance.assign(take, NegativeSource::kModel);
  out.short_of_negatives = take < static_cast<std::size_t>(n);
  return out;
}

std::vector<TrainingInstance> export_instances(std::span<const DatasetEntry> dataset,
                                               const Corpus& corpus,
                                               const SplitAssignment& assignment,
                                               std::span<const Split> splits,
                                               const ExportOptions& options) {
  const std::set<Split> wanted(splits.begin(), splits.end());
  std::vector<const DatasetEntry*> selected;
  for (const auto& e : dataset) {
    auto it = assignment.assignment.find(e.key());
    if (it != assignment.assignment.end() && wanted.contains(it->second)) selected.push_back(&e);
  }
  std::sort(selected.begin(), selected.end(),
            [](const DatasetEntry* a, const DatasetEntry* b) { return a->key() < b->key(); });

  ScoringOptions scoring;
  scoring.method = Method::kBm25;
  scoring.bm25 = options.bm25;

  std::vector<std::vector<TrainingInstance>> per_pair(selected.size());
  parallel_for(selected.size(), resolve_threads(options.threads), [&](std::size_t i) {
    const auto& entry = *selected[i];
    const Judgment& judgment = corpus.at(entry.pair.judgment_id);
    const Ranking ranking = score_pair(entry, judgment, scoring);
    for (int positive : entry.pair.relevant) {
      const auto seed = instance_seed(options.seed, entry.pair.query_id, entry.pair.judgment_id,
                                      positive);
      auto sample = sample_static_negatives(entry.pair, judgment, ranking, options.spec, seed);
      per_pair[i].push_back({entry.pair.query_id, entry.pair.judgment_id, positive,
                             std::move(sample.negatives), std::move(sample.provenance),
                             sample.short_of_negatives});
    }
  });
  std::vector<TrainingInstance> out;
  for (auto& group : per_pair) {
    for (auto& inst : group) out.push_back(std::move(inst));
  }
  return out;
}

std::string dump_instances(std::span<const TrainingInstance> instances) {
  std::string out;
  for (const auto& inst : instances) {
    json provenance = json::array();
    for (auto p : inst.provenance) provenance.push_back(to_string(p));
    const json j = {{"query_id", inst.query_id},     {"judgment_id", inst.judgment_id},
                    {"positive", inst.positive},     {"negatives", inst.negatives},
                    {"provenance", provenance},      {"short", inst.short_of_negatives}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TrainingInstance> read_instances(const fs::path& path) {
  std::vector<TrainingInstance> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) {
    TrainingInstance inst;
    j.at("query_id").get_to(inst.query_id);
    j.at("judgment_id").get_to(inst.judgment_id);
    j.at("positive").get_to(inst.positive);
    j.at("negatives").get_to(inst.negatives);
    for (const auto& name : j.at("provenance").get<std::vector<std::string>>()) {
      const auto source = negative_source_from_string(name);
      if (!source) throw ParseError("unknown provenance '" + name + "'");
      inst.provenance.push_back(*source);
    }
    if (inst.provenance.size() != inst.negatives.size()) {
      throw ParseError("provenance and negatives lengths differ");
    }
    inst.short_of_negatives = j.value("short", false);
    out.push_back(std::move(inst));
  });
  return out;
}

}  // namespace jurisrank
