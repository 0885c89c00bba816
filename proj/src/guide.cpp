#include "jurisrank/guide.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "jurisrank/errors.hpp"
#include "jurisrank/hash.hpp"
#include "jurisrank/jsonl.hpp"

namespace jurisrank {

Guide parse_guide_structure(std::span<const OutlineEntry> outline) {
  if (outline.empty()) throw MalformedOutline("empty outline");
  const auto& first = outline.front();
  if (first.level != 0) {
    throw MalformedOutline(first.guide_id + ": outline must start with a level-0 title");
  }
  Guide guide{first.guide_id, GuideNode{first.title, 0, first.section_text, {}}};
  if (first.title.empty()) throw MalformedOutline(first.guide_id + ": empty guide title");

  // Stack of the currently open path, root first.
  std::vector<GuideNode*> open{&guide.root};
  for (std::size_t i = 1; i < outline.size(); ++i) {
    const auto& e = outline[i];
    const std::string where = e.guide_id + " entry " + std::to_string(i + 1);
    if (e.guide_id != guide.guide_id) throw MalformedOutline(where + ": mixed guide ids");
    if (e.title.empty()) throw MalformedOutline(where + ": empty title");
    if (e.level < 1) throw MalformedOutline(where + ": second level-0 heading");
    const int deepest = open.back()->level;
    if (e.level > deepest + 1) {
      throw MalformedOutline(where + ": level jumps from " + std::to_string(deepest) + " to " +
                             std::to_string(e.level));
    }
    open.resize(static_cast<std::size_t>(e.level));
    auto& children = open.back()->children;
    children.push_back(GuideNode{e.title, e.level, e.section_text, {}});
    open.push_back(&children.back());
  }
  return guide;
}

std::vector<OutlineEntry> read_outline(const fs::path& file) {
  std::vector<OutlineEntry> out;
  for_each_jsonl(file, [&](const json& j, std::size_t) {
    OutlineEntry e;
    j.at("guide_id").get_to(e.guide_id);
    j.at("level").get_to(e.level);
    j.at("title").get_to(e.title);
    e.section_text = j.value("section_text", "");
    out.push_back(std::move(e));
  });
  return out;
}

std::vector<Guide> read_guides(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> order;
  std::map<std::string, std::vector<OutlineEntry>> grouped;
  for (const auto& f : files) {
    for (auto& e : read_outline(f)) {
      auto& bucket = grouped[e.guide_id];
      if (bucket.empty()) order.push_back(e.guide_id);
      bucket.push_back(std::move(e));
    }
  }
  std::vector<Guide> guides;
  for (const auto& id : order) guides.push_back(parse_guide_structure(grouped[id]));
  return guides;
}

std::string build_query(std::span<const std::string> path, std::string_view delimiter) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out.append(delimiter);
    out += path[i];
  }
  return out;
}

std::string make_query_id(std::string_view guide_id, std::span<const std::string> path) {
  Fnv1a64 h;
  h.field(guide_id);
  for (const auto& title : path) h.field(title);
  return "q" + to_hex(h.value());
}

namespace {

template <typename Visit>
void walk(const GuideNode& node, std::vector<std::string>& path, const Visit& visit) {
  path.push_back(node.title);
  visit(node, path);
  for (const auto& child : node.children) walk(child, path, visit);
  path.pop_back();
}

}  // namespace

std::vector<QueryRecord> leaf_queries(const Guide& guide, std::string_view delimiter) {
  std::vector<QueryRecord> out;
  std::vector<std::string> path;
  walk(guide.root, path, [&](const GuideNode& node, const std::vector<std::string>& p) {
    if (!node.is_leaf()) return;
    out.push_back({make_query_id(guide.guide_id, p), guide.guide_id, p, build_query(p, delimiter)});
  });
  return out;
}

AliasResolver AliasResolver::from_tsv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file.string());
  std::unordered_map<std::string, std::string> table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ParseError(file.string() + ":" + std::to_string(lineno) + ": expected label<TAB>id");
    }
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return AliasResolver(std::move(table));
}

std::optional<std::string> AliasResolver::resolve(std::string_view label) const {
  if (auto it = table_.find(std::string(label)); it != table_.end()) return it->second;
  if (auto bare = strip_year(label)) {
    if (auto it = table_.find(*bare); it != table_.end()) return it->second;
  }
  return std::nullopt;
}

std::map<std::string, std::size_t> DatasetBuild::drop_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : drops) ++counts[d.reason];
  return counts;
}

namespace {

std::string_view reason_for(CitationIssueKind kind) {
  switch (kind) {
    case CitationIssueKind::kMalformed:
      return drop_reason::kMalformed;
    case CitationIssueKind::kMissingPinpoint:
      return drop_reason::kMissingPinpoint;
    case CitationIssueKind::kUnresolvableLabel:
      return drop_reason::kUnresolvableLabel;
  }
  return drop_reason::kMalformed;
}

}  // namespace

DatasetBuild assemble_pairs(std::span<const Guide> guides, const Resolver& resolver,
                            const Corpus& corpus, std::string_view delimiter) {
  DatasetBuild build;
  for (const auto& guide : guides) {
    std::vector<std::string> path;
    walk(guide.root, path, [&](const GuideNode& node, const std::vector<std::string>& p) {
      const std::string query_id = make_query_id(guide.guide_id, p);
      const auto parsed = parse_pinpoint_citations(node.section_text);
      auto drop = [&](std::string label, std::string_view reason) {
        build.drops.push_back({query_id, std::move(label), std::string(reason)});
      };

      if (!node.is_leaf()) {
        for (const auto& ref : parsed.refs) drop(ref.case_label, drop_reason::kNonLeafSection);
        for (const auto& issue : parsed.issues) drop(issue.case_label, drop_reason::kNonLeafSection);
        return;
      }

      build.queries.push_back({query_id, guide.guide_id, p, build_query(p, delimiter)});
      for (const auto& issue : parsed.issues) drop(issue.case_label, reason_for(issue.kind));

      std::map<std::string, std::set<int>> relevant_by_judgment;
      std::map<std::string, std::string> label_of;
      for (const auto& ref : parsed.refs) {
        const auto judgment_id = resolver(ref.case_label);
        const Judgment* judgment = judgment_id ? corpus.find(*judgment_id) : nullptr;
        if (!judgment) {
          drop(ref.case_label, drop_reason::kUnmapped);
          continue;
        }
        auto& relevant = relevant_by_judgment[judgment->judgment_id];
        label_of.emplace(judgment->judgment_id, ref.case_label);
        for (int num : ref.paragraph_nums) {
          if (judgment->has_paragraph(num)) {
            relevant.insert(num);
          } else {
            drop(ref.case_label + ", \xC2\xA7 " + std::to_string(num), drop_reason::kUnknownParagraph);
          }
        }
      }

      for (const auto& [judgment_id, relevant] : relevant_by_judgment) {
        const auto& label = label_of.at(judgment_id);
        if (relevant.empty()) continue;  // all numbers already reported as unknown
        const Judgment& judgment = corpus.at(judgment_id);
        if (relevant.size() == judgment.size()) {
          drop(label, drop_reason::kWholeJudgment);
          continue;
        }
        DatasetEntry entry;
        entry.query = build.queries.back();
        entry.pair = {query_id, judgment_id, std::vector<int>(relevant.begin(), relevant.end())};
        build.entries.push_back(std::move(entry));
      }
    });
  }
  return build;
}

}  // namespace jurisrank
