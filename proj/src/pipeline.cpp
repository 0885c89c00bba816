#include "jurisrank/pipeline.hpp"

#include <chrono>
#include <iostream>
#include <map>
#include <set>

#include "jurisrank/errors.hpp"
#include "jurisrank/eval.hpp"
#include "jurisrank/guide.hpp"
#include "jurisrank/hash.hpp"
#include "jurisrank/ingest.hpp"
#include "jurisrank/jsonl.hpp"
#include "jurisrank/negatives.hpp"
#include "jurisrank/stats.hpp"

namespace jurisrank {

namespace {

void log_line(const std::string& message) { std::cerr << "jurisrank: " << message << '\n'; }

Corpus load_corpus(const fs::path& path) { return Corpus(read_judgments(path)); }

std::set<std::string> keys_in(const SplitAssignment& assignment, std::span<const Split> splits) {
  const std::set<Split> wanted(splits.begin(), splits.end());
  std::set<std::string> keys;
  for (const auto& [key, split] : assignment.assignment) {
    if (wanted.contains(split)) keys.insert(key);
  }
  return keys;
}

}  // namespace

std::vector<fs::path> run_ingest(const IngestCommand& cmd) {
  const auto report = ingest_directory(cmd.html_dir, cmd.metadata, SegmentOptions{cmd.start_num});
  for (const auto& failure : report.failures) log_line("ingest: skipped " + failure);
  if (report.judgments.empty()) throw ParseError("ingest produced no judgments");
  write_judgments(cmd.out, report.judgments);
  log_line("ingest: " + std::to_string(report.judgments.size()) + " judgments, " +
           std::to_string(report.filtered_out) + " non-judgment documents filtered");
  return {cmd.out};
}

std::vector<fs::path> run_build_dataset(const BuildDatasetCommand& cmd) {
  const Corpus corpus = load_corpus(cmd.corpus);
  const auto guides = read_guides(cmd.outlines);
  const auto aliases = AliasResolver::from_tsv(cmd.aliases);
  const auto build = assemble_pairs(
      guides, [&](std::string_view label) { return aliases.resolve(label); }, corpus,
      cmd.delimiter);
  for (const auto& e : build.entries) {
    const auto problems = validate_pair(e.pair, corpus.at(e.pair.judgment_id));
    if (!problems.empty()) throw Error("internal: built invalid pair " + e.key() + ": " + problems.front());
  }
  const fs::path drops = cmd.drops.value_or(cmd.out.parent_path() / "drops.jsonl");
  std::string drop_lines;
  for (const auto& d : build.drops) {
    drop_lines += json{{"query_id", d.query_id}, {"case_label", d.case_label}, {"reason", d.reason}}.dump();
    drop_lines += '\n';
  }
  write_dataset(cmd.out, build.entries);
  write_file_atomic(drops, drop_lines);
  log_line("build-dataset: " + std::to_string(build.queries.size()) + " queries, " +
           std::to_string(build.entries.size()) + " pairs, " + std::to_string(build.drops.size()) +
           " dropped citations");
  return {cmd.out, drops};
}

std::vector<fs::path> run_split(const SplitCommand& cmd) {
  const auto dataset = read_dataset(cmd.dataset);
  const auto items = split_items(dataset);
  const auto assignment = make_splits(items, cmd.config);
  const auto violations = verify_splits(assignment, items);
  if (!violations.empty()) throw Error("internal: split violates " + violations.front());
  write_file_atomic(cmd.out, splits_to_json(assignment));
  std::string summary;
  for (Split s : kAllSplits) {
    summary += " " + std::string(to_string(s)) + "=" + std::to_string(assignment.count(s));
  }
  log_line("split:" + summary);
  return {cmd.out};
}

std::vector<fs::path> run_score(const ScoreCommand& cmd) {
  auto dataset = read_dataset(cmd.dataset);
  if (!cmd.only_splits.empty()) {
    if (!cmd.splits) throw ConfigError("--split filtering needs --splits");
    const auto keep = keys_in(read_splits(*cmd.splits), cmd.only_splits);
    std::erase_if(dataset, [&](const DatasetEntry& e) { return !keep.contains(e.key()); });
  }
  const Corpus corpus = load_corpus(cmd.corpus);

  ScoringOptions options;
  options.method = cmd.method;
  options.bm25 = cmd.bm25;
  options.maxsim_normalize = cmd.maxsim_normalize;
  options.threads = cmd.threads;
  std::optional<EmbeddingStore> store;
  std::optional<ExternalScores> external;
  if (cmd.method == Method::kDot || cmd.method == Method::kMaxSim) {
    if (!cmd.embeddings) throw ConfigError("method " + std::string(to_string(cmd.method)) + " needs --embeddings");
    store = read_embedding_store(*cmd.embeddings);
    options.embeddings = &*store;
  } else if (cmd.method == Method::kExternal) {
    if (!cmd.scores) throw ConfigError("method external needs --scores");
    external = load_external_scores(*cmd.scores);
    options.external = &*external;
  }
  const auto rankings = score_all(dataset, corpus, options);
  write_rankings(cmd.out, rankings);
  log_line("score: ranked " + std::to_string(rankings.size()) + " pairs with " +
           std::string(to_string(cmd.method)));
  return {cmd.out};
}

std::vector<fs::path> run_export_negatives(const ExportNegativesCommand& cmd) {
  const auto spec = preset_from_string(cmd.preset);
  if (!spec) throw ConfigError("unknown preset '" + cmd.preset + "'");
  const auto dataset = read_dataset(cmd.dataset);
  const Corpus corpus = load_corpus(cmd.corpus);
  const auto assignment = read_splits(cmd.splits);
  ExportOptions options{*spec, cmd.bm25, cmd.seed, cmd.threads};
  const auto instances = export_instances(dataset, corpus, assignment, cmd.only_splits, options);
  write_file_atomic(cmd.out, dump_instances(instances));
  const auto n_short = std::count_if(instances.begin(), instances.end(),
                                     [](const TrainingInstance& i) { return i.short_of_negatives; });
  log_line("export-negatives: " + std::to_string(instances.size()) + " instances (" +
           std::to_string(n_short) + " short)");
  return {cmd.out};
}

std::vector<fs::path> run_refresh_negatives(const RefreshNegativesCommand& cmd) {
  const auto instances = read_instances(cmd.train);
  const auto dataset = read_dataset(cmd.dataset);
  const Corpus corpus = load_corpus(cmd.corpus);
  const auto scores = load_external_scores(cmd.scores);
  std::map<std::string, const DatasetEntry*> by_key;
  for (const auto& e : dataset) by_key.emplace(e.key(), &e);

  std::vector<TrainingInstance> refreshed;
  for (const auto& inst : instances) {
    const auto key = pair_key(inst.query_id, inst.judgment_id);
    auto it = by_key.find(key);
    if (it == by_key.end()) throw ParseError("training instance for unknown pair " + key);
    const auto& pair = it->second->pair;
    auto sample = refresh_model_negatives(pair, corpus.at(inst.judgment_id),
                                          pair_scores(scores, inst.query_id, inst.judgment_id), cmd.n);
    refreshed.push_back({inst.query_id, inst.judgment_id, inst.positive, std::move(sample.negatives),
                         std::move(sample.provenance), sample.short_of_negatives});
  }
  write_file_atomic(cmd.out, dump_instances(refreshed));
  log_line("refresh-negatives: " + std::to_string(refreshed.size()) + " instances");
  return {cmd.out};
}

std::vector<fs::path> run_eval(const EvalCommand& cmd) {
  const auto rankings = read_rankings(cmd.rankings);
  const auto assignment = read_splits(cmd.splits);
  const auto dataset = read_dataset(cmd.dataset);
  EvalOptions options;
  options.ks = cmd.ks;
  options.macro_by_query = cmd.macro_by_query;
  const auto table =
      evaluate_run(rankings, dataset, assignment, options, RunInfo{cmd.method, cmd.config_hash, assignment.seed});
  write_file_atomic(cmd.out, results_to_json(table));
  for (const auto& [split, row] : table.mean_recall) {
    std::string line = "eval: " + std::string(to_string(split));
    for (const auto& [k, mean] : row) {
      line += " R@" + std::to_string(static_cast<int>(k)) + "%=" + std::to_string(mean);
    }
    log_line(line);
  }
  return {cmd.out};
}

std::vector<fs::path> run_stats(const StatsCommand& cmd) {
  const Corpus corpus = load_corpus(cmd.corpus);
  const auto dataset = read_dataset(cmd.dataset);
  write_file_atomic(cmd.out, stats_to_json(corpus_stats(corpus, dataset)));
  return {cmd.out};
}

// ---------------------------------------------------------------------------
// Full pipeline

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages = {"ingest", "build-dataset", "split", "score",
                                                  "export-negatives", "eval", "stats"};
  return stages;
}

namespace {

std::optional<fs::path> path_field(const json& j, const char* name, const fs::path& base) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  fs::path p = j.at(name).get<std::string>();
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

json path_json(const std::optional<fs::path>& p) {
  return p ? json(p->generic_string()) : json(nullptr);
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base) {
  static const std::set<std::string> known = {
      "out_dir", "stages",     "html_dir",   "metadata",  "outlines", "aliases",
      "corpus",  "dataset",    "splits",     "embeddings", "scores",  "rankings",
      "results", "stats",      "train",      "method",    "bm25",     "maxsim_normalize",
      "preset",  "export_split", "ks",       "macro",     "seed",     "delimiter",
      "start_num", "split",    "threads"};
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown run config field '" + key + "'");
  }
  try {
    RunConfig c;
    c.out_dir = path_field(j, "out_dir", base).value_or(base / "out");
    c.stages = j.value("stages", pipeline_stages());
    c.html_dir = path_field(j, "html_dir", base);
    c.metadata = path_field(j, "metadata", base);
    c.outlines = path_field(j, "outlines", base);
    c.aliases = path_field(j, "aliases", base);
    c.corpus = path_field(j, "corpus", base);
    c.dataset = path_field(j, "dataset", base);
    c.splits = path_field(j, "splits", base);
    c.embeddings = path_field(j, "embeddings", base);
    c.scores = path_field(j, "scores", base);
    c.rankings = path_field(j, "rankings", base);
    c.results = path_field(j, "results", base);
    c.stats = path_field(j, "stats", base);
    c.train = path_field(j, "train", base);
    if (j.contains("method")) {
      const auto m = method_from_string(j.at("method").get<std::string>());
      if (!m) throw ConfigError("unknown method '" + j.at("method").get<std::string>() + "'");
      c.method = *m;
    }
    if (j.contains("bm25")) {
      c.bm25.k1 = j.at("bm25").value("k1", c.bm25.k1);
      c.bm25.b = j.at("bm25").value("b", c.bm25.b);
    }
    c.maxsim_normalize = j.value("maxsim_normalize", c.maxsim_normalize);
    c.preset = j.value("preset", c.preset);
    c.export_split = j.value("export_split", c.export_split);
    c.ks = j.value("ks", c.ks);
    c.macro_by_query = j.value("macro", false);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    c.delimiter = j.value("delimiter", c.delimiter);
    c.start_num = j.value("start_num", c.start_num);
    c.threads = j.value("threads", 0u);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      if (s.contains("guide_holdout")) {
        const auto& g = s.at("guide_holdout");
        if (g.is_number()) {
          c.split.guide_holdout = g.get<double>();
        } else {
          c.split.guide_holdout = g.get<std::set<std::string>>();
        }
      }
      c.split.query_holdout = s.value("query_holdout", c.split.query_holdout);
      c.split.train = s.value("train", c.split.train);
      c.split.val = s.value("val", c.split.val);
      c.split.test = s.value("test", c.split.test);
    }
    if (c.seed) c.split.seed = *c.seed;
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
}

RunConfig load_run_config(const fs::path& file) {
  if (!fs::exists(file)) throw ConfigError("config file " + file.string() + " not found");
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_run_config(j, fs::absolute(file).parent_path());
}

json RunConfig::to_json() const {
  json guide_holdout;
  if (const auto* ids = std::get_if<std::set<std::string>>(&split.guide_holdout)) {
    guide_holdout = *ids;
  } else {
    guide_holdout = std::get<double>(split.guide_holdout);
  }
  return {{"out_dir", out_dir.generic_string()},
          {"stages", stages},
          {"html_dir", path_json(html_dir)},
          {"metadata", path_json(metadata)},
          {"outlines", path_json(outlines)},
          {"aliases", path_json(aliases)},
          {"corpus", path_json(corpus)},
          {"dataset", path_json(dataset)},
          {"splits", path_json(splits)},
          {"embeddings", path_json(embeddings)},
          {"scores", path_json(scores)},
          {"rankings", path_json(rankings)},
          {"results", path_json(results)},
          {"stats", path_json(stats)},
          {"train", path_json(train)},
          {"method", to_string(method)},
          {"bm25", {{"k1", bm25.k1}, {"b", bm25.b}}},
          {"maxsim_normalize", maxsim_normalize},
          {"preset", preset},
          {"export_split", export_split},
          {"ks", ks},
          {"macro", macro_by_query},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"delimiter", delimiter},
          {"start_num", start_num},
          {"split",
           {{"guide_holdout", guide_holdout},
            {"query_holdout", split.query_holdout},
            {"train", split.train},
            {"val", split.val},
            {"test", split.test}}}};
}

std::string RunConfig::hash() const {
  // Where outputs are written does not change the experiment.
  json j = to_json();
  for (const char* key : {"out_dir", "rankings", "results", "stats", "train"}) j.erase(key);
  return to_hex(fnv1a64(j.dump()));
}

namespace {

// Resolved input/output paths of every stage.
struct Plan {
  fs::path corpus, dataset, drops, splits, rankings, train, results, stats;
};

Plan make_plan(const RunConfig& c) {
  auto out = [&](const std::optional<fs::path>& p, const char* name) {
    return p.value_or(c.out_dir / name);
  };
  return {out(c.corpus, "judgments.jsonl"), out(c.dataset, "dataset.jsonl"),
          c.out_dir / "drops.jsonl",        out(c.splits, "splits.json"),
          out(c.rankings, "rankings.jsonl"), out(c.train, "train.jsonl"),
          out(c.results, "results.json"),   out(c.stats, "stats.json")};
}

bool requested(const RunConfig& c, std::string_view stage) {
  return std::find(c.stages.begin(), c.stages.end(), stage) != c.stages.end();
}

}  // namespace

void validate_run_config(const RunConfig& c) {
  if (c.stages.empty()) throw ConfigError("no stages requested");
  for (const auto& s : c.stages) {
    if (std::find(pipeline_stages().begin(), pipeline_stages().end(), s) == pipeline_stages().end()) {
      throw ConfigError("unknown stage '" + s + "'");
    }
  }
  c.bm25.validate();
  if (c.ks.empty()) throw ConfigError("ks must not be empty");
  for (double k : c.ks) {
    if (!(k > 0 && k <= 100)) throw ConfigError("k percent must lie in (0, 100]");
  }
  if (!split_from_string(c.export_split)) throw ConfigError("unknown export split '" + c.export_split + "'");
  if (!preset_from_string(c.preset)) throw ConfigError("unknown preset '" + c.preset + "'");

  const Plan plan = make_plan(c);
  std::set<std::string> produced;
  auto need = [&](const std::string& stage, const std::string& artifact,
                  const std::optional<fs::path>& configured, const fs::path& planned) {
    if (produced.contains(artifact)) return;
    const fs::path p = configured.value_or(planned);
    if (!configured && !fs::exists(p)) {
      throw ConfigError("stage " + stage + " needs '" + artifact + "' but none is configured");
    }
    if (!fs::exists(p)) {
      throw ConfigError("stage " + stage + ": " + artifact + " path " + p.string() + " does not exist");
    }
  };
  for (const auto& stage : pipeline_stages()) {
    if (!requested(c, stage)) continue;
    if (stage == "ingest") {
      need(stage, "html_dir", c.html_dir, {});
      need(stage, "metadata", c.metadata, {});
      produced.insert("corpus");
    } else if (stage == "build-dataset") {
      need(stage, "outlines", c.outlines, {});
      need(stage, "aliases", c.aliases, {});
      need(stage, "corpus", c.corpus, plan.corpus);
      produced.insert("dataset");
    } else if (stage == "split") {
      need(stage, "dataset", c.dataset, plan.dataset);
      if (!c.seed) throw ConfigError("stage split needs a seed");
      produced.insert("splits");
    } else if (stage == "score") {
      need(stage, "dataset", c.dataset, plan.dataset);
      need(stage, "corpus", c.corpus, plan.corpus);
      if (c.method == Method::kDot || c.method == Method::kMaxSim) {
        need(stage, "embeddings", c.embeddings, {});
      } else if (c.method == Method::kExternal) {
        need(stage, "scores", c.scores, {});
      }
      produced.insert("rankings");
    } else if (stage == "export-negatives") {
      need(stage, "dataset", c.dataset, plan.dataset);
      need(stage, "corpus", c.corpus, plan.corpus);
      need(stage, "splits", c.splits, plan.splits);
      if (!c.seed) throw ConfigError("stage export-negatives needs a seed");
      produced.insert("train");
    } else if (stage == "eval") {
      need(stage, "rankings", c.rankings, plan.rankings);
      need(stage, "splits", c.splits, plan.splits);
      need(stage, "dataset", c.dataset, plan.dataset);
    } else if (stage == "stats") {
      need(stage, "corpus", c.corpus, plan.corpus);
      need(stage, "dataset", c.dataset, plan.dataset);
    }
  }
}

json run_pipeline(const RunConfig& c) {
  validate_run_config(c);
  const Plan plan = make_plan(c);
  const std::string config_hash = c.hash();
  fs::create_directories(c.out_dir);

  json stages = json::array();
  auto run_stage = [&](const std::string& name, const std::vector<fs::path>& inputs,
                       const std::vector<fs::path>& outputs, const auto& body) {
    log_line("stage " + name);
    json in = json::object();
    for (const auto& p : inputs) in[p.generic_string()] = file_digest(p);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      for (const auto& p : outputs) {
        std::error_code ec;
        fs::remove(p, ec);
      }
      throw StageFailure("stage " + name + " failed: " + e.what());
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    json out = json::object();
    for (const auto& p : outputs) out[p.generic_string()] = file_digest(p);
    stages.push_back({{"name", name}, {"inputs", in}, {"outputs", out}, {"seconds", elapsed.count()}});
  };

  for (const auto& stage : pipeline_stages()) {
    if (!requested(c, stage)) continue;
    if (stage == "ingest") {
      IngestCommand cmd{*c.html_dir, *c.metadata, plan.corpus, c.start_num};
      run_stage(stage, {cmd.html_dir, cmd.metadata}, {cmd.out}, [&] { run_ingest(cmd); });
    } else if (stage == "build-dataset") {
      BuildDatasetCommand cmd{*c.outlines, *c.aliases, plan.corpus, c.delimiter, plan.dataset, plan.drops};
      run_stage(stage, {cmd.outlines, cmd.aliases, cmd.corpus}, {cmd.out, plan.drops},
                [&] { run_build_dataset(cmd); });
    } else if (stage == "split") {
      SplitCommand cmd{plan.dataset, c.split, plan.splits};
      run_stage(stage, {cmd.dataset}, {cmd.out}, [&] { run_split(cmd); });
    } else if (stage == "score") {
      ScoreCommand cmd;
      cmd.method = c.method;
      cmd.dataset = plan.dataset;
      cmd.corpus = plan.corpus;
      cmd.embeddings = c.embeddings;
      cmd.scores = c.scores;
      cmd.bm25 = c.bm25;
      cmd.maxsim_normalize = c.maxsim_normalize;
      cmd.out = plan.rankings;
      cmd.threads = c.threads;
      std::vector<fs::path> inputs{cmd.dataset, cmd.corpus};
      if (cmd.method == Method::kDot || cmd.method == Method::kMaxSim) inputs.push_back(*cmd.embeddings);
      if (cmd.method == Method::kExternal) inputs.push_back(*cmd.scores);
      run_stage(stage, inputs, {cmd.out}, [&] { run_score(cmd); });
    } else if (stage == "export-negatives") {
      ExportNegativesCommand cmd;
      cmd.preset = c.preset;
      cmd.dataset = plan.dataset;
      cmd.corpus = plan.corpus;
      cmd.splits = plan.splits;
      cmd.only_splits = {*split_from_string(c.export_split)};
      cmd.seed = *c.seed;
      cmd.bm25 = c.bm25;
      cmd.out = plan.train;
      cmd.threads = c.threads;
      run_stage(stage, {cmd.dataset, cmd.corpus, cmd.splits}, {cmd.out},
                [&] { run_export_negatives(cmd); });
    } else if (stage == "eval") {
      EvalCommand cmd;
      cmd.rankings = plan.rankings;
      cmd.splits = plan.splits;
      cmd.dataset = plan.dataset;
      cmd.ks = c.ks;
      cmd.macro_by_query = c.macro_by_query;
      cmd.method = std::string(to_string(c.method));
      cmd.config_hash = config_hash;
      cmd.out = plan.results;
      run_stage(stage, {cmd.rankings, cmd.splits, cmd.dataset}, {cmd.out}, [&] { run_eval(cmd); });
    } else if (stage == "stats") {
      StatsCommand cmd{plan.corpus, plan.dataset, plan.stats};
      run_stage(stage, {cmd.corpus, cmd.dataset}, {cmd.out}, [&] { run_stats(cmd); });
    }
  }

  json manifest = {{"tool", "jurisrank"},
                   {"tool_version", JURISRANK_VERSION},
                   {"digest", "fnv1a64"},
                   {"config_hash", config_hash},
                   {"config", c.to_json()},
                   {"stages", std::move(stages)}};
  write_file_atomic(c.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace jurisrank
