#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jurisrank {

/// A pinpoint reference from guide text to specific paragraphs of one case.
struct CitationRef {
  std::string case_label;          // "Name v. State" plus optional ", <year>"
  std::vector<int> paragraph_nums;  // sorted, unique, positive
  std::optional<std::string> resolved_judgment_id;

  bool operator==(const CitationRef&) const = default;
};

enum class CitationIssueKind {
  kMalformed,           // descending or empty range, zero paragraph
  kMissingPinpoint,     // case named without a § reference
  kUnresolvableLabel,   // ibid. / op. cit. / idem
};

struct CitationIssue {
  CitationIssueKind kind;
  std::string case_label;
  std::string detail;
};

struct CitationParse {
  std::vector<CitationRef> refs;  // one per distinct label, in first-seen order
  std::vector<CitationIssue> issues;
};

/// Extracts every `<case label>, §[§] <list>` citation from a section of guide
/// prose. List items are `n` or `a-b` (a < b, expanded inclusively) separated
/// by commas or "and". References to the same label merge. A malformed range
/// discards that citation and records a kMalformed issue; the scan continues.
CitationParse parse_pinpoint_citations(std::string_view section_text);

/// Inverse of the parser for well-formed refs: consecutive numbers are
/// written as ranges.
std::string format_citation(const CitationRef& ref);

/// `label` with a trailing ", <4-digit year>" removed, or nullopt if none.
std::optional<std::string> strip_year(std::string_view label);

}  // namespace jurisrank
