#pragma once

// Internal helpers shared by the language parsers.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace multicolor::detail {

inline bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline std::vector<std::string> split_lines(std::string_view source) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : source) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    lines.push_back(std::move(current));
    return lines;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Keeps qualified ids unique within one parsed unit; repeated declarations
// of the same name get a deterministic "#n" suffix.
class IdAllocator {
public:
    std::string allocate(const std::string& base) {
        if (used_.insert(base).second) return base;
        for (int n = 2;; ++n) {
            std::string candidate = base + "#" + std::to_string(n);
            if (used_.insert(candidate).second) return candidate;
        }
    }

    bool contains(const std::string& id) const { return used_.count(id) > 0; }

private:
    std::set<std::string> used_;
};

}  // namespace multicolor::detail
