#include "jurisrank/external_scores.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include "jurisrank/errors.hpp"
#include "jurisrank/jsonl.hpp"

namespace jurisrank {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

ExternalScores parse_external_scores(std::string_view text) {
  ExternalScores scores;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string where = "scores line " + std::to_string(lineno);
    const auto fields = split_tabs(line);
    if (fields.size() != 4) throw ParseError(where + ": expected 4 tab-separated fields");

    ScoreKey key{std::string(fields[0]), std::string(fields[1]), 0};
    auto [p1, ec1] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(),
                                     key.para_num);
    if (ec1 != std::errc{} || p1 != fields[2].data() + fields[2].size() || key.para_num < 1) {
      throw ParseError(where + ": bad paragraph number '" + std::string(fields[2]) + "'");
    }
    double score = 0.0;
    auto [p2, ec2] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), score);
    if (ec2 != std::errc{} || p2 != fields[3].data() + fields[3].size()) {
      throw ParseError(where + ": bad score '" + std::string(fields[3]) + "'");
    }
    if (!std::isfinite(score)) {
      throw InvalidScore(where + ": non-finite score '" + std::string(fields[3]) + "'");
    }
    if (!scores.emplace(std::move(key), score).second) {
      throw DuplicateScore(where + ": duplicate score for " + std::string(fields[0]) + " / " +
                           std::string(fields[1]) + " / " + std::string(fields[2]));
    }
  }
  return scores;
}

ExternalScores load_external_scores(const fs::path& file) {
  return parse_external_scores(read_file(file));
}

std::string format_external_scores(const ExternalScores& scores) {
  std::string out;
  char buf[64];
  for (const auto& [key, score] : scores) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, score);
    out += key.query_id + '\t' + key.judgment_id + '\t' + std::to_string(key.para_num) + '\t';
    out.append(buf, end);
    out += '\n';
  }
  return out;
}

std::map<int, double> pair_scores(const ExternalScores& scores, std::string_view query_id,
                                  std::string_view judgment_id) {
  std::map<int, double> out;
  const ScoreKey lo{std::string(query_id), std::string(judgment_id), 0};
  for (auto it = scores.lower_bound(lo);
       it != scores.end() && it->first.query_id == query_id && it->first.judgment_id == judgment_id;
       ++it) {
    out.emplace(it->first.para_num, it->second);
  }
  return out;
}

}  // namespace jurisrank
