#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace jurisrank {

struct ScoreKey {
  std::string query_id;
  std::string judgment_id;
  int para_num = 0;

  auto operator<=>(const ScoreKey&) const = default;
};

using ExternalScores = std::map<ScoreKey, double>;

/// Parses `query_id \t judgment_id \t para_num \t score` lines. Throws
/// DuplicateScore on a repeated key, InvalidScore on a non-finite score
/// and ParseError on malformed lines.
ExternalScores parse_external_scores(std::string_view text);
ExternalScores load_external_scores(const std::filesystem::path& file);
std::string format_external_scores(const ExternalScores& scores);

/// Scores of one pair keyed by paragraph number.
std::map<int, double> pair_scores(const ExternalScores& scores, std::string_view query_id,
                                  std::string_view judgment_id);

}  // namespace jurisrank
