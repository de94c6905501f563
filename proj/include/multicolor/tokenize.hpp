#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace multicolor {

/// Identifier-aware tokenizer. Splits input on non-identifier characters,
/// then splits each compound identifier at underscores, camelCase
/// boundaries (including acronym runs), and letter/digit transitions.
/// Emits the lowercased compound followed by its lowercased subtokens;
/// a compound equal to its only subtoken is emitted once.
std::vector<std::string> tokenize_identifiers(std::string_view text);

/// Counts whitespace-delimited tokens shaped like code identifiers:
/// snake_case (an underscore between alphanumerics) or CamelCase (a
/// lower-to-upper transition). Surrounding punctuation is stripped first;
/// tokens without any letter are never counted.
int count_code_terms(std::string_view text);

}  // namespace multicolor
