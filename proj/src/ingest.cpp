#include "jurisrank/ingest.hpp"

#include <cctype>

#include "jurisrank/errors.hpp"
#include "jurisrank/html.hpp"
#include "jurisrank/jsonl.hpp"

namespace jurisrank {

std::vector<RawDoc> filter_corpus(std::span<const RawDoc> docs) {
  std::vector<RawDoc> out;
  for (const auto& d : docs) {
    if (d.doc_type == kEnglishJudgmentType) out.push_back(d);
  }
  return out;
}

std::optional<int> paragraph_marker(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t digits = 0;
  int value = 0;
  while (i + digits < text.size() && std::isdigit(static_cast<unsigned char>(text[i + digits]))) {
    value = value * 10 + (text[i + digits] - '0');
    if (++digits > 4) return std::nullopt;
  }
  if (digits == 0) return std::nullopt;
  i += digits;
  if (i + 1 >= text.size() || text[i] != '.') return std::nullopt;
  if (!std::isspace(static_cast<unsigned char>(text[i + 1]))) return std::nullopt;
  return value;
}

namespace {

// Opening quotation marks that identify verbatim text copied from another
// document: " ' “ „ ‘ «
bool starts_with_quote(std::string_view text) {
  static constexpr std::string_view marks[] = {"\"", "'", "\xE2\x80\x9C", "\xE2\x80\x9E",
                                               "\xE2\x80\x98", "\xC2\xAB"};
  for (auto m : marks) {
    if (text.starts_with(m)) return true;
  }
  return false;
}

std::string strip_marker(std::string_view text) {
  std::size_t i = text.find('.') + 1;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  return std::string(text.substr(i));
}

void append_block(std::string& target, std::string_view block) {
  if (!target.empty()) target += '\n';
  target.append(block);
}

}  // namespace

Segmentation segment_with_report(const RawDoc& raw, const SegmentOptions& options) {
  if (raw.html.empty()) throw UnparseableJudgment(raw.judgment_id + ": empty html");
  Segmentation seg;
  seg.judgment.judgment_id = raw.judgment_id;
  seg.judgment.title = raw.title;

  bool any_marker = false;
  for (const auto& block : html::extract_blocks(raw.html)) {
    const auto marker = paragraph_marker(block.text);
    any_marker = any_marker || marker.has_value();
    const int expected =
        seg.judgment.paragraphs.empty() ? options.start_num : seg.judgment.paragraphs.back().num + 1;
    if (marker && *marker == expected && !block.quoted && !starts_with_quote(block.text)) {
      seg.judgment.paragraphs.push_back({*marker, strip_marker(block.text)});
      continue;
    }
    if (marker) ++seg.absorbed_markers;
    if (seg.judgment.paragraphs.empty()) {
      append_block(seg.preamble, block.text);
    } else {
      append_block(seg.judgment.paragraphs.back().text, block.text);
    }
  }

  if (!any_marker) {
    throw UnparseableJudgment(raw.judgment_id + ": no numbered paragraph marker found");
  }
  if (seg.judgment.paragraphs.empty()) {
    throw UnparseableJudgment(raw.judgment_id + ": no paragraph numbered " +
                              std::to_string(options.start_num) + " starts the sequence");
  }
  return seg;
}

IngestReport ingest_directory(const fs::path& html_dir, const fs::path& metadata,
                              const SegmentOptions& options) {
  std::vector<RawDoc> docs;
  for_each_jsonl(metadata, [&](const json& j, std::size_t) {
    RawDoc d;
    j.at("judgment_id").get_to(d.judgment_id);
    j.at("doc_type").get_to(d.doc_type);
    d.language = j.value("language", "");
    d.title = j.value("title", "");
    docs.push_back(std::move(d));
  });

  IngestReport report;
  auto kept = filter_corpus(docs);
  report.filtered_out = docs.size() - kept.size();
  for (auto& doc : kept) {
    const auto file = html_dir / (doc.judgment_id + ".html");
    if (!fs::exists(file)) {
      report.failures.push_back(doc.judgment_id + ": missing " + file.filename().string());
      continue;
    }
    doc.html = read_file(file);
    try {
      report.judgments.push_back(segment_paragraphs(doc, options));
    } catch (const UnparseableJudgment& e) {
      report.failures.push_back(e.what());
    }
  }
  return report;
}

}  // namespace jurisrank
