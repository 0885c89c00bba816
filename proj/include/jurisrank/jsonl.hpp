#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jurisrank/corpus.hpp"

namespace jurisrank {

using json = nlohmann::json;
namespace fs = std::filesystem;

void to_json(json& j, const Paragraph& p);
void from_json(const json& j, Paragraph& p);
void to_json(json& j, const Judgment& judgment);
void from_json(const json& j, Judgment& judgment);
void to_json(json& j, const DatasetEntry& entry);
void from_json(const json& j, DatasetEntry& entry);
void to_json(json& j, const Ranking& ranking);
void from_json(const json& j, Ranking& ranking);

std::string read_file(const fs::path& path);

/// Writes through a sibling temporary and renames, so a failed write never
/// leaves a truncated file behind.
void write_file_atomic(const fs::path& path, std::string_view content);

/// Hex FNV-1a digest of a file's bytes (or of every file under a directory,
/// in sorted path order).
std::string file_digest(const fs::path& path);

/// Calls `on_line(json, line_number)` for every non-blank line. Malformed
/// JSON raises ParseError naming the file and line.
void for_each_jsonl(const fs::path& path,
                    const std::function<void(const json&, std::size_t)>& on_line);

template <typename T>
std::vector<T> read_jsonl(const fs::path& path) {
  std::vector<T> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) { out.push_back(j.get<T>()); });
  return out;
}

template <typename T>
std::string dump_jsonl(std::span<const T> items) {
  std::string out;
  for (const auto& item : items) {
    out += json(item).dump();
    out += '\n';
  }
  return out;
}

std::vector<Judgment> read_judgments(const fs::path& path);
void write_judgments(const fs::path& path, std::span<const Judgment> judgments);

/// Reads dataset.jsonl and checks each record's own invariants (non-empty
/// path, query text consistency is the builder's concern).
std::vector<DatasetEntry> read_dataset(const fs::path& path);
void write_dataset(const fs::path& path, std::span<const DatasetEntry> entries);

std::vector<Ranking> read_rankings(const fs::path& path);
void write_rankings(const fs::path& path, std::span<const Ranking> rankings);

}  // namespace jurisrank
