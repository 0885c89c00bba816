#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jurisrank/corpus.hpp"

namespace jurisrank {

/// Document-type marker of English judgments in the source metadata.
inline constexpr std::string_view kEnglishJudgmentType = "HEJUD";

struct RawDoc {
  std::string judgment_id;
  std::string html;
  std::string doc_type;
  std::string language;
  std::string title;
};

/// Keeps the documents whose doc_type is the English-judgment marker, in order.
std::vector<RawDoc> filter_corpus(std::span<const RawDoc> docs);

struct SegmentOptions {
  int start_num = 1;
};

/// Segmentation output with the material that does not belong to any
/// paragraph. `preamble` is the body text before the first accepted
/// paragraph (case title, composition of the court, headings).
struct Segmentation {
  Judgment judgment;
  std::string preamble;
  int absorbed_markers = 0;  // blocks matching the marker grammar but not accepted
};

/// Leading paragraph number if `block_text` matches `^(\d{1,4})\.\s`
/// after leading whitespace is stripped.
std::optional<int> paragraph_marker(std::string_view block_text);

/// Segments a judgment into numbered paragraphs.
///
/// A block opens a new paragraph only if it is not a quotation, its text
/// starts with a numbered marker and the number is exactly one more than
/// the previous accepted number (the first must equal `start_num`). Any
/// other block is appended to the current paragraph, which absorbs
/// sub-paragraph numerals and paragraph numbers quoted from other
/// decisions. Throws UnparseableJudgment when no block carries a marker
/// or when no marker starts the sequence.
Segmentation segment_with_report(const RawDoc& raw, const SegmentOptions& options = {});

inline Judgment segment_paragraphs(const RawDoc& raw, const SegmentOptions& options = {}) {
  return segment_with_report(raw, options).judgment;
}

struct IngestReport {
  std::vector<Judgment> judgments;
  std::size_t filtered_out = 0;
  std::vector<std::string> failures;  // "<judgment_id>: <reason>"
};

/// Reads `metadata.jsonl` and `<judgment_id>.html` files from `html_dir`,
/// filters and segments them. Unparseable documents are reported, not fatal.
IngestReport ingest_directory(const std::filesystem::path& html_dir,
                              const std::filesystem::path& metadata,
                              const SegmentOptions& options = {});

}  // namespace jurisrank
