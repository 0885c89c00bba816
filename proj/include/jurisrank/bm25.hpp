#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "jurisrank/corpus.hpp"
#include "jurisrank/tokenizer.hpp"

namespace jurisrank {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const;
};

/// Lexical statistics of the paragraphs of a single judgment. Document
/// frequencies and the average length are computed over that judgment only.
class TermIndex {
 public:
  struct Posting {
    int paragraph;  // position in paragraph_nums()
    int tf;
  };

  static TermIndex build(const Judgment& judgment, const Tokenizer& tokenizer = tokenize);

  std::size_t paragraph_count() const noexcept { return nums_.size(); }
  const std::vector<int>& paragraph_nums() const noexcept { return nums_; }

  /// Token count of each paragraph, floored at 1 so length normalisation
  /// stays defined for paragraphs without tokens.
  const Eigen::VectorXd& lengths() const noexcept { return lengths_; }
  double avgdl() const noexcept { return avgdl_; }

  int df(std::string_view term) const;
  int tf(std::string_view term, std::size_t paragraph) const;
  const std::vector<Posting>* postings(std::string_view term) const;
  const Tokenizer& tokenizer() const noexcept { return tokenizer_; }

 private:
  std::vector<int> nums_;
  Eigen::VectorXd lengths_;
  double avgdl_ = 0.0;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  Tokenizer tokenizer_;
};

/// BM25 idf with the +1 inside the logarithm, which keeps it positive.
inline double bm25_idf(double n_paragraphs, double df) {
  return std::log((n_paragraphs - df + 0.5) / (df + 0.5) + 1.0);
}

/// Scores every paragraph of the indexed judgment. Entry i belongs to
/// paragraph_nums()[i]. Each distinct query term counts once.
Eigen::VectorXd bm25_score(std::string_view query_text, const TermIndex& index,
                           const Bm25Params& params = {});

}  // namespace jurisrank
