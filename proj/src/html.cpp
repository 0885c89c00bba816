#include "jurisrank/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace jurisrank::html {

namespace {

const std::unordered_set<std::string_view>& block_tags() {
  static const std::unordered_set<std::string_view> tags = {
      "address", "article", "aside",   "blockquote", "body",   "br",     "caption",
      "dd",      "div",     "dl",      "dt",         "fieldset", "figcaption",
      "figure",  "footer",  "form",    "h1",         "h2",     "h3",     "h4",
      "h5",      "h6",      "header",  "hr",         "html",   "li",     "main",
      "nav",     "ol",      "p",       "pre",        "section", "table", "tbody",
      "td",      "tfoot",   "th",      "thead",      "tr",     "ul"};
  return tags;
}

bool skipped_content(std::string_view tag) {
  return tag == "head" || tag == "script" || tag == "style";
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> table = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
      {"apos", '\''},    {"nbsp", 0xA0},    {"ndash", 0x2013}, {"mdash", 0x2014},
      {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
      {"bdquo", 0x201E}, {"laquo", 0xAB},   {"raquo", 0xBB},   {"sect", 0xA7},
      {"hellip", 0x2026}, {"middot", 0xB7}, {"deg", 0xB0},     {"copy", 0xA9},
      {"eacute", 0xE9},  {"egrave", 0xE8},  {"agrave", 0xE0},  {"aacute", 0xE1},
      {"ouml", 0xF6},    {"uuml", 0xFC},    {"auml", 0xE4},    {"ccedil", 0xE7},
      {"iacute", 0xED},  {"oacute", 0xF3},  {"uacute", 0xFA},  {"szlig", 0xDF},
      {"shy", 0xAD},     {"ensp", 0x2002},  {"emsp", 0x2003},  {"thinsp", 0x2009}};
  return table;
}

struct OpenElement {
  std::string tag;
  bool quoted = false;
};

class BlockExtractor {
 public:
  explicit BlockExtractor(std::string_view html) : html_(html) {}

  std::vector<TextBlock> run() {
    std::size_t i = 0;
    while (i < html_.size()) {
      if (html_[i] == '<') {
        i = consume_markup(i);
      } else {
        std::size_t next = html_.find('<', i);
        if (next == std::string_view::npos) next = html_.size();
        if (skip_depth_ == 0) append_text(html_.substr(i, next - i));
        i = next;
      }
    }
    flush();
    return std::move(blocks_);
  }

 private:
  std::size_t consume_markup(std::size_t i) {
    if (html_.compare(i, 4, "<!--") == 0) {
      auto end = html_.find("-->", i + 4);
      return end == std::string_view::npos ? html_.size() : end + 3;
    }
    auto end = html_.find('>', i);
    if (end == std::string_view::npos) {
      // Unterminated tag: treat the rest as text.
      if (skip_depth_ == 0) append_text(html_.substr(i));
      return html_.size();
    }
    std::string_view inner = html_.substr(i + 1, end - i - 1);
    if (inner.empty() || inner[0] == '!' || inner[0] == '?') return end + 1;
    const bool closing = inner[0] == '/';
    if (closing) inner.remove_prefix(1);
    std::size_t name_end = 0;
    while (name_end < inner.size() &&
           (std::isalnum(static_cast<unsigned char>(inner[name_end])) || inner[name_end] == '-')) {
      ++name_end;
    }
    if (name_end == 0) {
      // "<" not followed by a tag name, e.g. "a < b".
      if (skip_depth_ == 0) append_text(html_.substr(i, 1));
      return i + 1;
    }
    const std::string tag = lower(inner.substr(0, name_end));
    const std::string_view attrs = inner.substr(name_end);
    const bool self_closing = !attrs.empty() && attrs.back() == '/';

    if (skipped_content(tag)) {
      if (closing) {
        if (skip_depth_ > 0) --skip_depth_;
      } else if (!self_closing) {
        ++skip_depth_;
      }
      return end + 1;
    }
    if (skip_depth_ > 0) return end + 1;

    if (block_tags().contains(tag)) {
      flush();
      if (tag == "br" || tag == "hr" || self_closing) return end + 1;
      if (closing) {
        close_element(tag);
      } else {
        if (tag == "p" && !open_.empty() && open_.back().tag == "p") open_.pop_back();
        open_.push_back({tag, tag == "blockquote" || quote_class(attrs)});
      }
    }
    return end + 1;
  }

  static bool quote_class(std::string_view attrs) {
    const std::string a = lower(attrs);
    auto pos = a.find("class");
    if (pos == std::string::npos) return false;
    return a.find("quot", pos) != std::string::npos;
  }

  void close_element(const std::string& tag) {
    for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
      if (it->tag == tag) {
        open_.erase(std::next(it).base(), open_.end());
        return;
      }
    }
  }

  bool inside_quote() const {
    return std::any_of(open_.begin(), open_.end(), [](const OpenElement& e) { return e.quoted; });
  }

  void append_text(std::string_view raw) {
    if (buffer_.find_first_not_of(" \t\r\n") == std::string::npos &&
        raw.find_first_not_of(" \t\r\n") != std::string_view::npos) {
      buffer_quoted_ = inside_quote();
    }
    buffer_.append(raw);
  }

  void flush() {
    std::string text = collapse_whitespace(decode_entities(buffer_));
    if (!text.empty()) blocks_.push_back({std::move(text), buffer_quoted_});
    buffer_.clear();
    buffer_quoted_ = false;
  }

  std::string_view html_;
  std::vector<TextBlock> blocks_;
  std::vector<OpenElement> open_;
  std::string buffer_;
  bool buffer_quoted_ = false;
  int skip_depth_ = 0;
};

}  // namespace

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += text[i++];
      continue;
    }
    std::string_view name = text.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (!name.empty() && name[0] == '#') {
      std::uint32_t cp = 0;
      bool ok = name.size() > 1;
      const bool hex = ok && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        const auto c = static_cast<unsigned char>(name[k]);
        if (hex && std::isxdigit(c)) {
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
        } else if (!hex && std::isdigit(c)) {
          cp = cp * 10 + (c - '0');
        } else {
          ok = false;
        }
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok && (!hex || name.size() > 2)) {
        append_utf8(out, cp);
        decoded = true;
      }
    } else if (auto it = named_entities().find(name); it != named_entities().end()) {
      append_utf8(out, it->second);
      decoded = true;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    std::size_t width = 1;
    if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xA0) {
      space = true;
      width = 2;
    }
    if (space) {
      pending_space = !out.empty();
      i += width - 1;
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(c);
  }
  return out;
}

std::vector<TextBlock> extract_blocks(std::string_view html) { return BlockExtractor(html).run(); }

}  // namespace jurisrank::html
