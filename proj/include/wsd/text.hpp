#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wsd::text {

std::string to_lower(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

bool is_punct(char c);

/// Strips leading and trailing ASCII punctuation; may return an empty string.
std::string_view strip_punct(std::string_view s);

/// Corpus tokenizer: whitespace split, punctuation stripped, empty tokens dropped,
/// lowercased when `fold_case` is set.
std::vector<std::string> corpus_tokens(std::string_view s, bool fold_case);

/// Context tokenizer for raw example text: whitespace split, with leading and trailing
/// punctuation split off into their own tokens ("end." -> "end", ".").
std::vector<std::string> context_tokens(std::string_view s);

}  // namespace wsd::text
