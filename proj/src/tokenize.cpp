#include "multicolor/tokenize.hpp"

#include <cctype>

#include "multicolor/repo_path.hpp"

namespace multicolor {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)); }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)); }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Splits a run of letters/digits at camel and letter<->digit boundaries.
void split_camel(std::string_view part, std::vector<std::string>& out) {
    if (part.empty()) return;
    size_t start = 0;
    for (size_t i = 1; i < part.size(); ++i) {
        const char prev = part[i - 1];
        const char cur = part[i];
        bool boundary = false;
        if (is_lower(prev) && is_upper(cur)) boundary = true;
        // End of an acronym run: "HTTPServer" -> "HTTP" | "Server".
        else if (is_upper(prev) && is_upper(cur) && i + 1 < part.size() && is_lower(part[i + 1]))
            boundary = true;
        else if (is_alpha(prev) && is_digit(cur)) boundary = true;
        else if (is_digit(prev) && is_alpha(cur)) boundary = true;
        if (boundary) {
            out.push_back(ascii_lower(part.substr(start, i - start)));
            start = i;
        }
    }
    out.push_back(ascii_lower(part.substr(start)));
}

std::vector<std::string> subtokens(std::string_view compound) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= compound.size(); ++i) {
        if (i == compound.size() || compound[i] == '_') {
            if (i > start) split_camel(compound.substr(start, i - start), out);
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> tokenize_identifiers(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
        if (!is_ident_char(text[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        const std::string_view compound = text.substr(i, j - i);
        std::string lowered = ascii_lower(compound);
        auto subs = subtokens(compound);
        if (subs.size() == 1 && subs.front() == lowered) {
            tokens.push_back(std::move(lowered));
        } else {
            tokens.push_back(std::move(lowered));
            for (auto& sub : subs) tokens.push_back(std::move(sub));
        }
        i = j;
    }
    return tokens;
}

int count_code_terms(std::string_view text) {
    int count = 0;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::string_view token = text.substr(i, j - i);
        i = j;

        // Strip surrounding punctuation, keeping identifier characters.
        size_t begin = 0, end = token.size();
        while (begin < end && !is_ident_char(token[begin])) ++begin;
        while (end > begin && !is_ident_char(token[end - 1])) --end;
        token = token.substr(begin, end - begin);
        if (token.empty()) continue;

        bool has_letter = false;
        bool snake = false;
        bool camel = false;
        for (size_t k = 0; k < token.size(); ++k) {
            if (is_alpha(token[k])) has_letter = true;
            if (k > 0 && k + 1 < token.size() && token[k] == '_' &&
                std::isalnum(static_cast<unsigned char>(token[k - 1])) &&
                std::isalnum(static_cast<unsigned char>(token[k + 1]))) {
                snake = true;
            }
            if (k > 0 && is_lower(token[k - 1]) && is_upper(token[k])) camel = true;
        }
        if (has_letter && (snake || camel)) ++count;
    }
    return count;
}

}  // namespace multicolor
