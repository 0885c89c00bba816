#include "jurisrank/citation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace jurisrank {

namespace {

constexpr std::string_view kSection = "\xC2\xA7";  // §
constexpr std::string_view kEnDash = "\xE2\x80\x93";
constexpr std::string_view kEmDash = "\xE2\x80\x94";

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool has_lower(std::string_view w) {
  return std::any_of(w.begin(), w.end(),
                     [](unsigned char c) { return std::islower(c) != 0; });
}

// Capitalised word, or a word starting with a multi-byte UTF-8 letter.
bool is_name_word(std::string_view w) {
  if (w.empty()) return false;
  const auto c = static_cast<unsigned char>(w.front());
  return std::isupper(c) || c >= 0xC0;
}

bool is_connector(std::string_view w) {
  static const std::unordered_set<std::string_view> words = {
      "and", "of", "the", "de", "da", "del", "della", "di", "do", "dos",
      "du", "la", "le", "les", "van", "von", "der", "den", "y", "e", "&"};
  return words.contains(w);
}

// Capitalised words that open a sentence or clause rather than a case name.
bool is_stop_word(std::string_view w) {
  static const std::unordered_set<std::string_view> words = {
      "See", "In", "Cf.", "Cf", "Compare", "Also", "Thus", "However", "For", "As",
      "Similarly", "Likewise", "Under", "By", "Following", "Per", "Contrast", "And",
      "But", "Moreover", "Further", "Furthermore", "Accordingly", "Referring"};
  return words.contains(w);
}

bool is_abbreviation(std::string_view w) {
  static const std::unordered_set<std::string_view> words = {"Ltd.", "Inc.", "Co.", "Mr.",
                                                             "Mrs.", "Ms.", "St.", "Jr."};
  return words.contains(w);
}

// A word ending in '.' that closes a sentence ("Russia." but not "S.A.S.").
bool sentence_final(std::string_view w) {
  return w.size() > 1 && w.back() == '.' && has_lower(w) && !is_abbreviation(w);
}

std::string join(const std::vector<std::string_view>& words) {
  std::string out;
  for (auto w : words) {
    if (!out.empty()) out += ' ';
    out.append(w);
  }
  return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::string> left_party(std::string_view text, std::size_t versus) {
  std::size_t start = text.find_last_of(";(:\n[", versus == 0 ? 0 : versus - 1);
  start = start == std::string_view::npos ? 0 : start + 1;
  // Opening typographic quote also bounds the party.
  auto words = split_words(text.substr(start, versus - start));
  std::vector<std::string_view> taken;
  for (auto it = words.rbegin(); it != words.rend(); ++it) {
    const std::string_view w = *it;
    if (w.back() == ',' || w.back() == ')' || sentence_final(w) || is_stop_word(w)) break;
    if (!is_name_word(w) && !is_connector(w)) break;
    taken.push_back(w);
    if (taken.size() > 8) return std::nullopt;
  }
  while (!taken.empty() && is_connector(taken.back())) taken.pop_back();
  if (taken.empty()) return std::nullopt;
  std::reverse(taken.begin(), taken.end());
  return join(taken);
}

struct Party {
  std::string text;
  std::size_t end = 0;  // offset just past the last word kept
};

std::optional<Party> right_party(std::string_view text, std::size_t pos) {
  std::vector<std::pair<std::string_view, std::size_t>> taken;  // word, end offset
  while (pos < text.size() && taken.size() <= 10) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\n') ++end;
    std::string_view word = text.substr(pos, end - pos);
    std::string_view core = word;
    while (!core.empty() && (core.back() == ',' || core.back() == ';' || core.back() == ')' ||
                             core.back() == ':')) {
      core.remove_suffix(1);
    }
    bool terminal = core.size() != word.size() || end >= text.size() || text[end] == '\n';
    if (sentence_final(core)) {
      core.remove_suffix(1);
      terminal = true;
    }
    if (core.empty() || core.front() == '(' || core.front() == '[') break;
    if (!is_name_word(core) && !is_connector(core)) break;
    taken.emplace_back(core, pos + core.size());
    if (terminal) break;
    pos = end;
  }
  while (!taken.empty() && is_connector(taken.back().first)) taken.pop_back();
  const bool has_name = std::any_of(taken.begin(), taken.end(),
                                    [](const auto& t) { return is_name_word(t.first); });
  if (!has_name) return std::nullopt;
  std::vector<std::string_view> words;
  for (const auto& t : taken) words.push_back(t.first);
  return Party{join(words), taken.back().second};
}

std::size_t skip_spaces(std::string_view text, std::size_t pos) {
  while (pos < text.size() && text[pos] == ' ') ++pos;
  return pos;
}

std::size_t read_digits(std::string_view text, std::size_t pos, int& value) {
  std::size_t end = pos;
  value = 0;
  while (end < text.size() && is_digit(text[end]) && end - pos < 6) {
    value = value * 10 + (text[end] - '0');
    ++end;
  }
  return end;
}

// Label suffixes that distinguish judgments of the same parties.
std::size_t consume_suffixes(std::string_view text, std::size_t pos, std::string& label) {
  while (true) {
    std::size_t p = skip_spaces(text, pos);
    std::string_view rest = text.substr(p);
    if (rest.starts_with("[GC]")) {
      label += " [GC]";
      pos = p + 4;
    } else if (rest.starts_with("(dec.)")) {
      label += " (dec.)";
      pos = p + 6;
    } else if (rest.starts_with("(no. ")) {
      int n = 0;
      std::size_t e = read_digits(text, p + 5, n);
      if (e == p + 5 || e >= text.size() || text[e] != ')') return pos;
      label += " (no. " + std::to_string(n) + ")";
      pos = e + 1;
    } else {
      return pos;
    }
  }
}

// Application numbers "no. 4916/07" or "nos. 1/05 and 2/06"; not part of the label.
std::size_t skip_application_numbers(std::string_view text, std::size_t pos) {
  std::string_view rest = text.substr(pos);
  std::size_t p = pos;
  if (rest.starts_with("nos. ")) {
    p += 5;
  } else if (rest.starts_with("no. ")) {
    p += 4;
  } else {
    return pos;
  }
  bool any = false;
  while (true) {
    int v = 0;
    std::size_t e = read_digits(text, p, v);
    if (e == p || e >= text.size() || text[e] != '/') break;
    std::size_t e2 = read_digits(text, e + 1, v);
    if (e2 == e + 1) break;
    any = true;
    p = e2;
    if (text.substr(p).starts_with(" and ") && p + 5 < text.size() && is_digit(text[p + 5])) {
      p += 5;
    } else if (text.substr(p).starts_with(", ") && p + 2 < text.size() && is_digit(text[p + 2]) &&
               text.find('/', p + 2) < text.find_first_of(",; )", p + 2)) {
      p += 2;
    } else {
      break;
    }
  }
  return any ? p : pos;
}

std::size_t match_dash(std::string_view text, std::size_t pos) {
  if (pos < text.size() && text[pos] == '-') return 1;
  std::string_view rest = text.substr(pos);
  if (rest.starts_with(kEnDash) || rest.starts_with(kEmDash)) return 3;
  return 0;
}

struct PinpointList {
  std::vector<int> nums;
  std::string error;
  std::size_t end = 0;
};

// Parses the list after a § or §§ marker at `pos`.
PinpointList parse_list(std::string_view text, std::size_t pos) {
  PinpointList out;
  pos += kSection.size();
  if (text.substr(pos).starts_with(kSection)) pos += kSection.size();
  pos = skip_spaces(text, pos);
  std::set<int> nums;
  while (true) {
    int a = 0;
    std::size_t e = read_digits(text, pos, a);
    if (e == pos) {
      if (out.error.empty()) out.error = "no paragraph number after section sign";
      break;
    }
    pos = e;
    int b = a;
    if (std::size_t dash = match_dash(text, pos)) {
      std::size_t e2 = read_digits(text, pos + dash, b);
      if (e2 == pos + dash) {
        out.error = "range " + std::to_string(a) + " has no upper bound";
        break;
      }
      pos = e2;
      if (a >= b && out.error.empty()) {
        out.error = "range " + std::to_string(a) + "-" + std::to_string(b) + " is not ascending";
      }
    }
    if (a < 1 && out.error.empty()) out.error = "paragraph number 0";
    for (int n = a; n <= b; ++n) nums.insert(n);
    std::string_view rest = text.substr(pos);
    if (rest.starts_with(", ") && pos + 2 < text.size() && is_digit(text[pos + 2])) {
      pos += 2;
    } else if (rest.starts_with(",") && pos + 1 < text.size() && is_digit(text[pos + 1])) {
      pos += 1;
    } else if (rest.starts_with(" and ") && pos + 5 < text.size() && is_digit(text[pos + 5])) {
      pos += 5;
    } else {
      break;
    }
  }
  out.end = pos;
  if (out.error.empty()) out.nums.assign(nums.begin(), nums.end());
  return out;
}

void scan_unresolvable(std::string_view text, std::vector<CitationIssue>& issues) {
  static constexpr std::string_view labels[] = {"ibid.", "Ibid.", "ibid", "Ibid",
                                                "op. cit.", "idem", "Idem"};
  std::vector<std::pair<std::size_t, std::string_view>> hits;
  for (auto label : labels) {
    for (std::size_t p = text.find(label); p != std::string_view::npos;
         p = text.find(label, p + 1)) {
      if (p > 0 && std::isalpha(static_cast<unsigned char>(text[p - 1]))) continue;
      std::size_t q = p + label.size();
      if (q < text.size() && text[q] == '.') ++q;
      if (q < text.size() && text[q] == ',') ++q;
      q = skip_spaces(text, q);
      if (!text.substr(q).starts_with(kSection)) continue;
      // Prefer the longest label starting at the same offset.
      auto same = std::find_if(hits.begin(), hits.end(), [p](const auto& h) { return h.first == p; });
      if (same == hits.end()) {
        hits.emplace_back(p, label);
      } else if (label.size() > same->second.size()) {
        same->second = label;
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  for (const auto& [pos, label] : hits) {
    issues.push_back({CitationIssueKind::kUnresolvableLabel, std::string(label),
                      "reference relative to an earlier citation"});
  }
}

std::size_t find_versus(std::string_view text, std::size_t from) {
  for (std::size_t p = text.find(" v. ", from); p != std::string_view::npos;
       p = text.find(" v. ", p + 1)) {
    if (p > 0 && text[p - 1] != ' ') return p;
  }
  return std::string_view::npos;
}

}  // namespace

CitationParse parse_pinpoint_citations(std::string_view text) {
  CitationParse out;
  scan_unresolvable(text, out.issues);
  std::unordered_map<std::string, std::size_t> by_label;

  std::size_t pos = 0;
  for (std::size_t hit = find_versus(text, pos); hit != std::string_view::npos;
       hit = find_versus(text, pos)) {
    const auto left = left_party(text, hit);
    const auto right = right_party(text, hit + 4);
    if (!left || !right) {
      pos = hit + 4;
      continue;
    }
    std::string label = *left + " v. " + right->text;
    std::size_t cursor = consume_suffixes(text, right->end, label);

    std::optional<PinpointList> list;
    bool has_year = false;
    while (cursor < text.size()) {
      std::size_t p = cursor;
      const bool comma = text[p] == ',';
      if (comma) ++p;
      p = skip_spaces(text, p);
      if (text.substr(p).starts_with(kSection)) {
        list = parse_list(text, p);
        cursor = list->end;
        break;
      }
      if (!comma) break;
      int year = 0;
      std::size_t e = read_digits(text, p, year);
      if (!has_year && e == p + 4 && year >= 1900 &&
          (e >= text.size() || (!is_digit(text[e]) && !match_dash(text, e)))) {
        label += ", " + std::to_string(year);
        has_year = true;
        cursor = e;
        continue;
      }
      if (std::size_t after = skip_application_numbers(text, p); after != p) {
        cursor = after;
        continue;
      }
      break;
    }
    pos = std::max(cursor, hit + 4);

    if (!list) {
      out.issues.push_back({CitationIssueKind::kMissingPinpoint, label, "no paragraph reference"});
      continue;
    }
    if (!list->error.empty()) {
      out.issues.push_back({CitationIssueKind::kMalformed, label, list->error});
      continue;
    }
    auto [it, inserted] = by_label.emplace(label, out.refs.size());
    if (inserted) {
      out.refs.push_back({label, list->nums, std::nullopt});
    } else {
      auto& nums = out.refs[it->second].paragraph_nums;
      nums.insert(nums.end(), list->nums.begin(), list->nums.end());
      std::sort(nums.begin(), nums.end());
      nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
    }
  }
  return out;
}

std::string format_citation(const CitationRef& ref) {
  std::string out = ref.case_label;
  out += ref.paragraph_nums.size() == 1 ? ", \xC2\xA7 " : ", \xC2\xA7\xC2\xA7 ";
  const auto& nums = ref.paragraph_nums;
  for (std::size_t i = 0; i < nums.size();) {
    std::size_t j = i;
    while (j + 1 < nums.size() && nums[j + 1] == nums[j] + 1) ++j;
    if (i > 0) out += ", ";
    out += std::to_string(nums[i]);
    if (j > i) out += "-" + std::to_string(nums[j]);
    i = j + 1;
  }
  return out;
}

std::optional<std::string> strip_year(std::string_view label) {
  if (label.size() < 7) return std::nullopt;
  std::string_view tail = label.substr(label.size() - 6);
  if (tail[0] != ',' || tail[1] != ' ') return std::nullopt;
  if (!std::all_of(tail.begin() + 2, tail.end(), is_digit)) return std::nullopt;
  return std::string(label.substr(0, label.size() - 6));
}

}  // namespace jurisrank
