#include "jurisrank/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "jurisrank/errors.hpp"

namespace jurisrank {

Ranking rank_paragraphs(std::string query_id, std::string judgment_id,
                        std::span<const RankedParagraph> scores) {
  Ranking r{std::move(query_id), std::move(judgment_id), {scores.begin(), scores.end()}};
  for (const auto& e : r.entries) {
    if (std::isnan(e.score)) {
      throw InvalidScore("NaN score for paragraph " + std::to_string(e.num) + " of " + r.key());
    }
  }
  std::sort(r.entries.begin(), r.entries.end(),
            [](const RankedParagraph& a, const RankedParagraph& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.num < b.num;
            });
  std::vector<int> nums = r.order();
  std::sort(nums.begin(), nums.end());
  if (std::adjacent_find(nums.begin(), nums.end()) != nums.end()) {
    throw ParseError("paragraph scored twice in " + r.key());
  }
  return r;
}

Ranking rank_paragraphs(std::string query_id, std::string judgment_id,
                        std::span<const int> nums, const Eigen::VectorXd& scores) {
  if (static_cast<Eigen::Index>(nums.size()) != scores.size()) {
    throw DimensionError("score vector length does not match paragraph count");
  }
  std::vector<RankedParagraph> entries;
  entries.reserve(nums.size());
  for (std::size_t i = 0; i < nums.size(); ++i) {
    entries.push_back({nums[i], scores[static_cast<Eigen::Index>(i)]});
  }
  return rank_paragraphs(std::move(query_id), std::move(judgment_id), entries);
}

}  // namespace jurisrank
