// jurisrank: paragraph retrieval benchmark over numbered court judgments.
//
// Exit codes: 0 success, 2 configuration error, 3 data validation error,
// 4 pipeline stage failure.

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "jurisrank/errors.hpp"
#include "jurisrank/jsonl.hpp"
#include "jurisrank/pipeline.hpp"

namespace jr = jurisrank;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<jr::Split> parse_splits(const std::string& s) {
  std::vector<jr::Split> out;
  for (const auto& name : split_list(s)) {
    const auto split = jr::split_from_string(name);
    if (!split) throw jr::ConfigError("unknown split '" + name + "'");
    out.push_back(*split);
  }
  return out;
}

std::vector<double> parse_ks(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw jr::ConfigError("bad k value '" + item + "'");
    }
  }
  return out;
}

jr::Method parse_method(const std::string& s) {
  const auto m = jr::method_from_string(s);
  if (!m) throw jr::ConfigError("unknown method '" + s + "'");
  return *m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paragraph-level retrieval benchmark for numbered legal judgments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", JURISRANK_VERSION);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: $JURISRANK_THREADS or all cores)");

  // ingest
  jr::IngestCommand ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Segment judgment HTML into numbered paragraphs");
  ingest_cmd->add_option("--html-dir", ingest.html_dir, "Directory of <judgment_id>.html")
      ->required()->check(CLI::ExistingDirectory);
  ingest_cmd->add_option("--metadata", ingest.metadata, "metadata.jsonl")
      ->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest.out, "Output judgments.jsonl")->required();
  ingest_cmd->add_option("--start-num", ingest.start_num, "Number of the first paragraph")
      ->check(CLI::PositiveNumber);

  // build-dataset
  jr::BuildDatasetCommand build;
  std::string drops_path;
  auto* build_cmd = app.add_subcommand("build-dataset", "Derive queries and relevance labels from guides");
  build_cmd->add_option("--outlines", build.outlines, "Directory of guide outline .jsonl files")
      ->required()->check(CLI::ExistingDirectory);
  build_cmd->add_option("--aliases", build.aliases, "aliases.tsv")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--corpus", build.corpus, "judgments.jsonl")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--delimiter", build.delimiter, "Heading delimiter in query text");
  build_cmd->add_option("--out", build.out, "Output dataset.jsonl")->required();
  build_cmd->add_option("--drops", drops_path, "Output drops.jsonl (default: next to --out)");

  // split
  jr::SplitCommand split;
  std::string guide_holdout;
  double guide_fraction = -1.0;
  auto* split_cmd = app.add_subcommand("split", "Assign pairs to train/val and the three test conditions");
  split_cmd->add_option("--dataset", split.dataset)->required()->check(CLI::ExistingFile);
  auto* gh = split_cmd->add_option("--guide-holdout", guide_holdout, "Comma-separated guide ids held out");
  auto* gf = split_cmd->add_option("--guide-holdout-fraction", guide_fraction,
                                   "Fraction of guides to hold out (seeded)");
  gh->excludes(gf);
  split_cmd->add_option("--query-holdout", split.config.query_holdout);
  split_cmd->add_option("--train", split.config.train);
  split_cmd->add_option("--val", split.config.val);
  split_cmd->add_option("--test", split.config.test);
  split_cmd->add_option("--seed", split.config.seed)->required();
  split_cmd->add_option("--out", split.out)->required();

  // score
  jr::ScoreCommand score;
  std::string score_method = "bm25";
  std::string score_splits;
  std::string score_splits_path, embeddings_path, scores_path;
  bool no_normalize = false;
  auto* score_cmd = app.add_subcommand("score", "Rank every paragraph of each pair's judgment");
  score_cmd->add_option("--method", score_method, "bm25|dot|maxsim|external");
  score_cmd->add_option("--dataset", score.dataset)->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--corpus", score.corpus)->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--splits", score_splits_path)->check(CLI::ExistingFile);
  score_cmd->add_option("--split", score_splits, "Only score pairs in these splits (comma list)");
  score_cmd->add_option("--embeddings", embeddings_path)->check(CLI::ExistingDirectory);
  score_cmd->add_option("--scores", scores_path, "External scores.tsv")->check(CLI::ExistingFile);
  score_cmd->add_option("--k1", score.bm25.k1);
  score_cmd->add_option("--b", score.bm25.b);
  score_cmd->add_flag("--no-normalize", no_normalize, "MaxSim over raw, unnormalised token vectors");
  score_cmd->add_option("--out", score.out)->required();

  // export-negatives
  jr::ExportNegativesCommand exporter;
  std::string export_splits = "train";
  auto* export_cmd = app.add_subcommand("export-negatives", "Write training instances with sampled negatives");
  export_cmd->add_option("--preset", exporter.preset, "dpr|colbert|cross");
  export_cmd->add_option("--dataset", exporter.dataset)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--corpus", exporter.corpus)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--splits", exporter.splits)->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--split", export_splits, "Splits to export (comma list)");
  export_cmd->add_option("--seed", exporter.seed)->required();
  export_cmd->add_option("--k1", exporter.bm25.k1);
  export_cmd->add_option("--b", exporter.bm25.b);
  export_cmd->add_option("--out", exporter.out)->required();

  // refresh-negatives
  jr::RefreshNegativesCommand refresh;
  auto* refresh_cmd = app.add_subcommand("refresh-negatives", "Replace negatives with model-ranked ones");
  refresh_cmd->add_option("--train", refresh.train, "Instances to refresh")->required()->check(CLI::ExistingFile);
  refresh_cmd->add_option("--dataset", refresh.dataset)->required()->check(CLI::ExistingFile);
  refresh_cmd->add_option("--corpus", refresh.corpus)->required()->check(CLI::ExistingFile);
  refresh_cmd->add_option("--scores", refresh.scores, "Model scores.tsv")->required()->check(CLI::ExistingFile);
  refresh_cmd->add_option("--n", refresh.n)->check(CLI::NonNegativeNumber);
  refresh_cmd->add_option("--out", refresh.out)->required();

  // eval
  jr::EvalCommand eval;
  std::string ks = "2,5,10";
  auto* eval_cmd = app.add_subcommand("eval", "Mean Recall@k% per split");
  eval_cmd->add_option("--rankings", eval.rankings)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--splits", eval.splits)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dataset", eval.dataset, "dataset.jsonl (relevance labels)")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--ks", ks, "Comma-separated k percentages");
  eval_cmd->add_flag("--macro", eval.macro_by_query, "Average per query before averaging over queries");
  eval_cmd->add_option("--method", eval.method, "Method label stored in the results");
  eval_cmd->add_option("--out", eval.out)->required();

  // stats
  jr::StatsCommand stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus and dataset statistics");
  stats_cmd->add_option("--corpus", stats.corpus)->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--dataset", stats.dataset)->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--out", stats.out)->required();

  // run
  std::string config_path, out_dir, stages, run_method;
  std::optional<std::uint64_t> run_seed;
  auto* run_cmd = app.add_subcommand("run", "Run pipeline stages from a JSON config");
  run_cmd->add_option("--config", config_path)->required();
  run_cmd->add_option("--out-dir", out_dir, "Overrides out_dir");
  run_cmd->add_option("--stages", stages, "Overrides stages (comma list)");
  run_cmd->add_option("--seed", run_seed, "Overrides seed");
  run_cmd->add_option("--method", run_method, "Overrides method");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest_cmd) {
      jr::run_ingest(ingest);
    } else if (*build_cmd) {
      if (!drops_path.empty()) build.drops = drops_path;
      jr::run_build_dataset(build);
    } else if (*split_cmd) {
      if (*gf) {
        split.config.guide_holdout = guide_fraction;
      } else {
        const auto ids = split_list(guide_holdout);
        split.config.guide_holdout = std::set<std::string>(ids.begin(), ids.end());
      }
      jr::run_split(split);
    } else if (*score_cmd) {
      score.method = parse_method(score_method);
      if (!score_splits_path.empty()) score.splits = score_splits_path;
      if (!score_splits.empty()) score.only_splits = parse_splits(score_splits);
      if (!embeddings_path.empty()) score.embeddings = embeddings_path;
      if (!scores_path.empty()) score.scores = scores_path;
      score.maxsim_normalize = !no_normalize;
      score.threads = threads;
      jr::run_score(score);
    } else if (*export_cmd) {
      exporter.only_splits = parse_splits(export_splits);
      exporter.threads = threads;
      jr::run_export_negatives(exporter);
    } else if (*refresh_cmd) {
      jr::run_refresh_negatives(refresh);
    } else if (*eval_cmd) {
      eval.ks = parse_ks(ks);
      jr::run_eval(eval);
    } else if (*stats_cmd) {
      jr::run_stats(stats);
    } else if (*run_cmd) {
      if (!std::filesystem::exists(config_path)) {
        throw jr::ConfigError("config file " + config_path + " not found");
      }
      jr::json j;
      try {
        j = jr::json::parse(jr::read_file(config_path));
      } catch (const jr::json::exception& e) {
        throw jr::ConfigError(config_path + ": " + e.what());
      }
      if (!out_dir.empty()) j["out_dir"] = std::filesystem::absolute(out_dir).string();
      if (!stages.empty()) j["stages"] = split_list(stages);
      if (run_seed) j["seed"] = *run_seed;
      if (!run_method.empty()) j["method"] = run_method;
      if (threads > 0) j["threads"] = threads;
      const auto config =
          jr::parse_run_config(j, std::filesystem::absolute(config_path).parent_path());
      jr::run_pipeline(config);
    }
  } catch (const jr::Error& e) {
    std::cerr << "jurisrank: error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "jurisrank: error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
