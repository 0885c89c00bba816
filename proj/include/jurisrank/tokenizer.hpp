#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace jurisrank {

/// Lowercases and splits on runs of non-alphanumeric characters. Letters
/// outside ASCII are kept inside tokens; only ASCII and Latin-1 capitals
/// are case-folded. No stemming, no stopwords.
std::vector<std::string> tokenize(std::string_view text);

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

}  // namespace jurisrank
