#include "jurisrank/jsonl.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "jurisrank/errors.hpp"
#include "jurisrank/hash.hpp"

namespace jurisrank {

void to_json(json& j, const Paragraph& p) { j = json{{"num", p.num}, {"text", p.text}}; }

void from_json(const json& j, Paragraph& p) {
  j.at("num").get_to(p.num);
  j.at("text").get_to(p.text);
}

void to_json(json& j, const Judgment& judgment) {
  j = json{{"judgment_id", judgment.judgment_id},
           {"title", judgment.title},
           {"paragraphs", judgment.paragraphs}};
}

void from_json(const json& j, Judgment& judgment) {
  j.at("judgment_id").get_to(judgment.judgment_id);
  judgment.title = j.value("title", "");
  j.at("paragraphs").get_to(judgment.paragraphs);
}

void to_json(json& j, const DatasetEntry& e) {
  j = json{{"query_id", e.query.query_id},     {"guide_id", e.query.guide_id},
           {"path", e.query.path},             {"query_text", e.query.query_text},
           {"judgment_id", e.pair.judgment_id}, {"relevant", e.pair.relevant}};
}

void from_json(const json& j, DatasetEntry& e) {
  j.at("query_id").get_to(e.query.query_id);
  j.at("guide_id").get_to(e.query.guide_id);
  j.at("path").get_to(e.query.path);
  j.at("query_text").get_to(e.query.query_text);
  j.at("judgment_id").get_to(e.pair.judgment_id);
  j.at("relevant").get_to(e.pair.relevant);
  e.pair.query_id = e.query.query_id;
}

void to_json(json& j, const Ranking& r) {
  json nums = json::array();
  json scores = json::array();
  for (const auto& e : r.entries) {
    nums.push_back(e.num);
    scores.push_back(e.score);
  }
  j = json{{"query_id", r.query_id},
           {"judgment_id", r.judgment_id},
           {"ranking", std::move(nums)},
           {"scores", std::move(scores)}};
}

void from_json(const json& j, Ranking& r) {
  j.at("query_id").get_to(r.query_id);
  j.at("judgment_id").get_to(r.judgment_id);
  const auto nums = j.at("ranking").get<std::vector<int>>();
  const auto scores = j.at("scores").get<std::vector<double>>();
  if (nums.size() != scores.size()) {
    throw ParseError("ranking and scores lengths differ");
  }
  r.entries.clear();
  for (std::size_t i = 0; i < nums.size(); ++i) r.entries.push_back({nums[i], scores[i]});
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string file_digest(const fs::path& path) {
  Fnv1a64 h;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      h.field(fs::relative(f, path).generic_string());
      h.field(read_file(f));
    }
  } else {
    h.update(read_file(path));
  }
  return to_hex(h.value());
}

void for_each_jsonl(const fs::path& path,
                    const std::function<void(const json&, std::size_t)>& on_line) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      on_line(json::parse(line), lineno);
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<Judgment> read_judgments(const fs::path& path) {
  std::vector<Judgment> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) {
    auto judgment = j.get<Judgment>();
    auto problems = validate_judgment(judgment);
    if (!problems.empty()) {
      throw ParseError("judgment '" + judgment.judgment_id + "': " + problems.front());
    }
    out.push_back(std::move(judgment));
  });
  return out;
}

void write_judgments(const fs::path& path, std::span<const Judgment> judgments) {
  write_file_atomic(path, dump_jsonl(judgments));
}

std::vector<DatasetEntry> read_dataset(const fs::path& path) {
  std::vector<DatasetEntry> out;
  for_each_jsonl(path, [&](const json& j, std::size_t) {
    auto entry = j.get<DatasetEntry>();
    if (entry.query.path.empty()) throw ParseError("empty query path");
    if (!std::is_sorted(entry.pair.relevant.begin(), entry.pair.relevant.end())) {
      throw ParseError("relevant list not sorted for " + entry.key());
    }
    out.push_back(std::move(entry));
  });
  return out;
}

void write_dataset(const fs::path& path, std::span<const DatasetEntry> entries) {
  write_file_atomic(path, dump_jsonl(entries));
}

std::vector<Ranking> read_rankings(const fs::path& path) { return read_jsonl<Ranking>(path); }

void write_rankings(const fs::path& path, std::span<const Ranking> rankings) {
  write_file_atomic(path, dump_jsonl(rankings));
}

}  // namespace jurisrank
