#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jurisrank::html {

/// A run of text between two block-level element boundaries, with inline
/// markup flattened, entities decoded and whitespace collapsed.
struct TextBlock {
  std::string text;
  bool quoted = false;  // inside <blockquote> or an element marked as a quotation
};

/// Splits an HTML document into non-empty text blocks in document order.
/// Content of <head>, <script> and <style> is skipped.
std::vector<TextBlock> extract_blocks(std::string_view html);

/// Decodes named, decimal and hex character references to UTF-8.
std::string decode_entities(std::string_view text);

/// Collapses runs of whitespace (including U+00A0) to one ASCII space and
/// trims both ends.
std::string collapse_whitespace(std::string_view text);

}  // namespace jurisrank::html
