#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jurisrank/bm25.hpp"
#include "jurisrank/retrieval.hpp"
#include "jurisrank/splits.hpp"

namespace jurisrank {

namespace fs = std::filesystem;

// Options of the individual subcommands. Each command reads its inputs,
// writes its outputs atomically and returns the paths it wrote.

struct IngestCommand {
  fs::path html_dir;
  fs::path metadata;
  fs::path out;
  int start_num = 1;
};

struct BuildDatasetCommand {
  fs::path outlines;
  fs::path aliases;
  fs::path corpus;
  std::string delimiter = " > ";
  fs::path out;
  std::optional<fs::path> drops;  // defaults to drops.jsonl next to `out`
};

struct SplitCommand {
  fs::path dataset;
  SplitConfig config;
  fs::path out;
};

struct ScoreCommand {
  Method method = Method::kBm25;
  fs::path dataset;
  fs::path corpus;
  std::optional<fs::path> splits;
  std::vector<Split> only_splits;  // empty: every pair in the dataset
  std::optional<fs::path> embeddings;
  std::optional<fs::path> scores;
  Bm25Params bm25;
  bool maxsim_normalize = true;
  fs::path out;
  unsigned threads = 0;
};

struct ExportNegativesCommand {
  std::string preset = "dpr";
  fs::path dataset;
  fs::path corpus;
  fs::path splits;
  std::vector<Split> only_splits{Split::kTrain};
  std::uint64_t seed = 13;
  Bm25Params bm25;
  fs::path out;
  unsigned threads = 0;
};

struct RefreshNegativesCommand {
  fs::path train;
  fs::path dataset;
  fs::path corpus;
  fs::path scores;
  int n = 5;
  fs::path out;
};

struct EvalCommand {
  fs::path rankings;
  fs::path splits;
  fs::path dataset;
  std::vector<double> ks{2, 5, 10};
  bool macro_by_query = false;
  std::string method;       // recorded in the results metadata
  std::string config_hash;  // recorded in the results metadata
  fs::path out;
};

struct StatsCommand {
  fs::path corpus;
  fs::path dataset;
  fs::path out;
};

std::vector<fs::path> run_ingest(const IngestCommand& cmd);
std::vector<fs::path> run_build_dataset(const BuildDatasetCommand& cmd);
std::vector<fs::path> run_split(const SplitCommand& cmd);
std::vector<fs::path> run_score(const ScoreCommand& cmd);
std::vector<fs::path> run_export_negatives(const ExportNegativesCommand& cmd);
std::vector<fs::path> run_refresh_negatives(const RefreshNegativesCommand& cmd);
std::vector<fs::path> run_eval(const EvalCommand& cmd);
std::vector<fs::path> run_stats(const StatsCommand& cmd);

/// Full-pipeline configuration, read from one JSON file. Relative paths
/// are resolved against the config file's directory; outputs without an
/// explicit path go to `out_dir` under their default file names.
struct RunConfig {
  fs::path out_dir = "out";
  std::vector<std::string> stages;

  std::optional<fs::path> html_dir, metadata, outlines, aliases;
  std::optional<fs::path> corpus, dataset, splits, embeddings, scores;
  std::optional<fs::path> rankings, results, stats, train;

  Method method = Method::kBm25;
  Bm25Params bm25;
  bool maxsim_normalize = true;
  std::string preset = "dpr";
  std::string export_split = "train";
  std::vector<double> ks{2, 5, 10};
  bool macro_by_query = false;
  std::optional<std::uint64_t> seed;
  std::string delimiter = " > ";
  int start_num = 1;
  SplitConfig split;
  unsigned threads = 0;

  /// Canonical JSON of the resolved configuration.
  nlohmann::json to_json() const;
  /// Digest of the settings and inputs; output locations are excluded.
  std::string hash() const;
};

/// Stage names in execution order.
const std::vector<std::string>& pipeline_stages();

RunConfig parse_run_config(const nlohmann::json& j, const fs::path& base_dir);
RunConfig load_run_config(const fs::path& file);

/// Checks stage names, that every input exists or is produced by an
/// earlier requested stage, and that a seed is set when a sampling stage
/// runs. Throws ConfigError; touches no files.
void validate_run_config(const RunConfig& config);

/// Validates, then runs the requested stages in dependency order and writes
/// `manifest.json` into out_dir. Returns the manifest. A failing stage has
/// its outputs removed and raises StageFailure naming it.
nlohmann::json run_pipeline(const RunConfig& config);

}  // namespace jurisrank
