#pragma once

// Random test inputs. Test-side only; std::mt19937_64 keeps runs reproducible
// on a given standard library.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "jurisrank/corpus.hpp"
#include "jurisrank/splits.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline int uniform_int(Engine& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::string word(int i) { return "w" + std::to_string(i); }

/// Space-separated words drawn from a vocabulary of `vocab` words.
inline std::string text(Engine& rng, int vocab, int min_len, int max_len) {
  const int len = uniform_int(rng, min_len, max_len);
  std::string out;
  for (int i = 0; i < len; ++i) {
    if (!out.empty()) out += ' ';
    // Skewed draw so some terms are frequent and some rare.
    const int a = uniform_int(rng, 0, vocab - 1);
    const int b = uniform_int(rng, 0, vocab - 1);
    out += word(std::min(a, b));
  }
  return out;
}

inline jurisrank::Judgment judgment(Engine& rng, const std::string& id, int n_paragraphs, int vocab) {
  jurisrank::Judgment j;
  j.judgment_id = id;
  j.title = "CASE OF " + id;
  for (int num = 1; num <= n_paragraphs; ++num) {
    j.paragraphs.push_back({num, text(rng, vocab, 1, 40)});
  }
  return j;
}

/// `count` distinct numbers sampled from [1, n].
inline std::vector<int> sample_nums(Engine& rng, int n, int count) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(count));
  std::sort(all.begin(), all.end());
  return all;
}

/// Synthetic split input: guides -> queries -> cited judgments.
inline std::vector<jurisrank::SplitItem> split_items(Engine& rng, int n_guides) {
  std::vector<jurisrank::SplitItem> items;
  for (int g = 0; g < n_guides; ++g) {
    const std::string guide = "guide" + std::to_string(g);
    const int n_queries = uniform_int(rng, 1, 8);
    for (int q = 0; q < n_queries; ++q) {
      const std::string query = guide + "-q" + std::to_string(q);
      const int n_judgments = uniform_int(rng, 1, 7);
      std::set<int> judgments;
      while (static_cast<int>(judgments.size()) < n_judgments) {
        judgments.insert(uniform_int(rng, 0, 300));
      }
      for (int j : judgments) {
        const std::string jid = "001-" + std::to_string(100000 + j);
        items.push_back({jurisrank::pair_key(query, jid), query, guide});
      }
    }
  }
  return items;
}

}  // namespace gen
