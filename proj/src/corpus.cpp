#include "jurisrank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "jurisrank/errors.hpp"
#include "jurisrank/hash.hpp"

namespace jurisrank {

std::string to_hex(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
  return out;
}

bool Judgment::has_paragraph(int num) const noexcept {
  // Paragraphs are sorted by number in valid judgments, but tolerate
  // unsorted input so validation can report on it.
  return std::any_of(paragraphs.begin(), paragraphs.end(),
                     [num](const Paragraph& p) { return p.num == num; });
}

std::vector<int> Judgment::paragraph_nums() const {
  std::vector<int> nums;
  nums.reserve(paragraphs.size());
  for (const auto& p : paragraphs) nums.push_back(p.num);
  return nums;
}

std::string pair_key(std::string_view query_id, std::string_view judgment_id) {
  std::string key;
  key.reserve(query_id.size() + judgment_id.size() + 1);
  key.append(query_id).append("|").append(judgment_id);
  return key;
}

std::vector<int> Ranking::order() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.num);
  return out;
}

Corpus::Corpus(std::vector<Judgment> judgments) : judgments_(std::move(judgments)) {
  for (std::size_t i = 0; i < judgments_.size(); ++i) {
    auto [it, inserted] = by_id_.emplace(judgments_[i].judgment_id, i);
    if (!inserted) {
      throw ParseError("duplicate judgment id '" + judgments_[i].judgment_id + "'");
    }
  }
}

const Judgment* Corpus::find(std::string_view judgment_id) const {
  auto it = by_id_.find(std::string(judgment_id));
  return it == by_id_.end() ? nullptr : &judgments_[it->second];
}

const Judgment& Corpus::at(std::string_view judgment_id) const {
  if (const auto* j = find(judgment_id)) return *j;
  throw UnknownJudgment("judgment '" + std::string(judgment_id) + "' not in corpus");
}

namespace {
bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}
}  // namespace

std::vector<std::string> validate_judgment(const Judgment& judgment) {
  std::vector<std::string> out;
  if (judgment.paragraphs.empty()) out.push_back("judgment has no paragraphs");
  int prev = 0;
  for (const auto& p : judgment.paragraphs) {
    if (p.num < 1) out.push_back("paragraph number " + std::to_string(p.num) + " < 1");
    if (p.num <= prev) {
      out.push_back("paragraph " + std::to_string(p.num) + " not strictly after " +
                    std::to_string(prev));
    }
    if (blank(p.text)) out.push_back("paragraph " + std::to_string(p.num) + " has empty text");
    prev = p.num;
  }
  return out;
}

std::vector<std::string> validate_pair(const QueryJudgmentPair& pair,
                                       const Judgment& judgment) {
  if (pair.judgment_id != judgment.judgment_id) {
    throw IdentityMismatch("pair references '" + pair.judgment_id +
                           "' but judgment is '" + judgment.judgment_id + "'");
  }
  std::vector<std::string> out;
  if (pair.relevant.empty()) {
    out.push_back("empty relevant set");
    return out;
  }
  std::set<int> known;
  for (const auto& p : judgment.paragraphs) known.insert(p.num);
  std::set<int> relevant(pair.relevant.begin(), pair.relevant.end());
  for (int num : relevant) {
    if (!known.contains(num)) out.push_back("unknown paragraph " + std::to_string(num));
  }
  if (relevant.size() != pair.relevant.size()) out.push_back("duplicate relevant paragraph");
  if (relevant == known) out.push_back("relevant set equals paragraph set");
  return out;
}

void normalize_relevant(std::vector<int>& relevant) {
  std::sort(relevant.begin(), relevant.end());
  relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
}

}  // namespace jurisrank
