#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "jurisrank/citation.hpp"
#include "jurisrank/corpus.hpp"

namespace jurisrank {

inline constexpr std::string_view kDefaultDelimiter = " > ";

/// One line of guide.outline.jsonl.
struct OutlineEntry {
  std::string guide_id;
  int level = 0;
  std::string title;
  std::string section_text;
};

struct GuideNode {
  std::string title;
  int level = 0;
  std::string section_text;
  std::vector<GuideNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

struct Guide {
  std::string guide_id;
  GuideNode root;
};

/// Builds the heading tree of one guide from its outline in document order.
/// The first entry must be the level-0 guide title and the only level-0
/// entry; a level may exceed its predecessor's by at most one.
/// Throws MalformedOutline otherwise.
Guide parse_guide_structure(std::span<const OutlineEntry> outline);

/// Reads every *.jsonl file under `dir` (sorted by name) and parses one
/// guide per distinct guide_id, in order of first appearance.
std::vector<Guide> read_guides(const std::filesystem::path& dir);
std::vector<OutlineEntry> read_outline(const std::filesystem::path& file);

std::string build_query(std::span<const std::string> path, std::string_view delimiter);

/// Stable identifier of a heading path within a guide.
std::string make_query_id(std::string_view guide_id, std::span<const std::string> path);

/// One QueryRecord per leaf, depth-first in document order.
std::vector<QueryRecord> leaf_queries(const Guide& guide, std::string_view delimiter);

/// Maps case labels to judgment ids from an alias table. A label carrying a
/// year that is not in the table falls back to the label without the year.
class AliasResolver {
 public:
  AliasResolver() = default;
  explicit AliasResolver(std::unordered_map<std::string, std::string> table)
      : table_(std::move(table)) {}

  /// Reads `case_label \t judgment_id` lines; '#' starts a comment line.
  static AliasResolver from_tsv(const std::filesystem::path& file);

  std::optional<std::string> resolve(std::string_view label) const;

 private:
  std::unordered_map<std::string, std::string> table_;
};

using Resolver = std::function<std::optional<std::string>(std::string_view)>;

namespace drop_reason {
inline constexpr std::string_view kMissingPinpoint = "missing paragraph-level reference";
inline constexpr std::string_view kUnmapped = "unmapped judgment";
inline constexpr std::string_view kUnresolvableLabel = "unresolvable label";
inline constexpr std::string_view kMalformed = "malformed citation";
inline constexpr std::string_view kNonLeafSection = "citation in non-leaf section";
inline constexpr std::string_view kUnknownParagraph = "unknown paragraph";
inline constexpr std::string_view kWholeJudgment = "relevant set equals paragraph set";
}  // namespace drop_reason

struct Drop {
  std::string query_id;
  std::string case_label;
  std::string reason;

  bool operator==(const Drop&) const = default;
};

struct DatasetBuild {
  std::vector<QueryRecord> queries;  // every leaf, with or without pairs
  std::vector<DatasetEntry> entries;
  std::vector<Drop> drops;

  std::map<std::string, std::size_t> drop_counts() const;
};

/// Distant supervision: every leaf heading becomes a query; the pinpoint
/// citations in its section text become relevant paragraphs of the cited
/// judgments. Citations in non-leaf sections are attributed to that section
/// and dropped, since the section is not a query. Every emitted pair passes
/// validate_pair against `corpus`.
DatasetBuild assemble_pairs(std::span<const Guide> guides, const Resolver& resolver,
                            const Corpus& corpus,
                            std::string_view delimiter = kDefaultDelimiter);

}  // namespace jurisrank
