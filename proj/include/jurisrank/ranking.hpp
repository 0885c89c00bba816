#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

#include "jurisrank/corpus.hpp"

namespace jurisrank {

/// Orders paragraphs by descending score, ties by ascending paragraph
/// number, so the result does not depend on input order. Throws
/// InvalidScore on NaN and ParseError on a repeated paragraph number.
Ranking rank_paragraphs(std::string query_id, std::string judgment_id,
                        std::span<const RankedParagraph> scores);

/// `scores[i]` belongs to `nums[i]`.
Ranking rank_paragraphs(std::string query_id, std::string judgment_id,
                        std::span<const int> nums, const Eigen::VectorXd& scores);

}  // namespace jurisrank
