#include <algorithm>

#include "multicolor/parse.hpp"
#include "parser_common.hpp"

namespace multicolor {

namespace {

using detail::ident_char;
using detail::ident_start;

const std::set<std::string>& python_keywords() {
    static const std::set<std::string> kw = {
        "and",    "as",     "assert", "async",  "await",  "break", "class", "continue",
        "def",    "del",    "elif",   "else",   "except", "False", "finally", "for",
        "from",   "global", "if",     "import", "in",     "is",    "lambda", "None",
        "nonlocal", "not",  "or",     "pass",   "raise",  "return", "True", "try",
        "while",  "with",   "yield"};
    return kw;
}

// Blanks comments and string literal contents while preserving line
// structure, so the structural scan never trips over quoted code.
std::string blank_strings_and_comments(std::string_view src, int& warnings) {
    std::string out(src);
    enum class State { Code, Single, Double, TripleSingle, TripleDouble };
    State state = State::Code;
    size_t i = 0;
    const size_t n = out.size();
    auto at = [&](size_t k, char c) { return k < n && out[k] == c; };
    while (i < n) {
        char c = out[i];
        switch (state) {
            case State::Code:
                if (c == '#') {
                    while (i < n && out[i] != '\n') out[i++] = ' ';
                } else if (c == '\'' || c == '"') {
                    if (at(i + 1, c) && at(i + 2, c)) {
                        state = (c == '\'') ? State::TripleSingle : State::TripleDouble;
                        out[i] = out[i + 1] = out[i + 2] = ' ';
                        i += 3;
                    } else {
                        state = (c == '\'') ? State::Single : State::Double;
                        out[i++] = ' ';
                    }
                } else {
                    ++i;
                }
                break;
            case State::Single:
            case State::Double: {
                const char quote = (state == State::Single) ? '\'' : '"';
                if (c == '\\' && i + 1 < n) {
                    out[i] = ' ';
                    if (out[i + 1] != '\n') out[i + 1] = ' ';
                    i += 2;
                } else if (c == quote || c == '\n') {
                    if (c == quote) out[i] = ' ';
                    ++i;
                    state = State::Code;
                } else {
                    out[i++] = ' ';
                }
                break;
            }
            case State::TripleSingle:
            case State::TripleDouble: {
                const char quote = (state == State::TripleSingle) ? '\'' : '"';
                if (c == quote && at(i + 1, quote) && at(i + 2, quote)) {
                    out[i] = out[i + 1] = out[i + 2] = ' ';
                    i += 3;
                    state = State::Code;
                } else {
                    if (c != '\n') out[i] = ' ';
                    ++i;
                }
                break;
            }
        }
    }
    if (state != State::Code) ++warnings;  // unterminated literal
    return out;
}

int indent_of(const std::string& line) {
    int indent = 0;
    for (char c : line) {
        if (c == ' ') ++indent;
        else if (c == '\t') indent += 8;
        else break;
    }
    return indent;
}

struct Scope {
    int indent;              // indent column of the def/class line
    int entity_index;        // -1 for module level
    EntityKind kind;
};

// Splits "A, b.C , D" into trimmed base refs, dropping keyword arguments
// such as metaclass=....
std::vector<std::string> split_bases(std::string_view inside) {
    std::vector<std::string> bases;
    size_t start = 0;
    int depth = 0;
    for (size_t i = 0; i <= inside.size(); ++i) {
        if (i < inside.size() && (inside[i] == '(' || inside[i] == '[')) ++depth;
        if (i < inside.size() && (inside[i] == ')' || inside[i] == ']')) --depth;
        if (i == inside.size() || (inside[i] == ',' && depth == 0)) {
            std::string base(detail::trim(inside.substr(start, i - start)));
            start = i + 1;
            if (base.empty() || base.find('=') != std::string::npos || base == "*") continue;
            bases.push_back(std::move(base));
        }
    }
    return bases;
}

}  // namespace

ParsedUnit parse_python(const RepoPath& file, std::string_view source) {
    ParsedUnit unit;
    unit.file = file;
    unit.language = Language::Python;

    int warnings = 0;
    const std::string cleaned = blank_strings_and_comments(source, warnings);
    const auto lines = detail::split_lines(cleaned);
    const std::string file_id = file.str();
    const auto& keywords = python_keywords();

    detail::IdAllocator ids;
    std::vector<Scope> scopes;
    std::vector<int> open_end;  // last non-blank line seen per open scope

    auto close_scopes_to = [&](int indent) {
        while (!scopes.empty() && scopes.back().indent >= indent) {
            if (scopes.back().entity_index >= 0) {
                unit.entities[scopes.back().entity_index].end_line = open_end.back();
            }
            scopes.pop_back();
            open_end.pop_back();
        }
    };

    auto current_scope_id = [&]() -> std::string {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->entity_index >= 0) return unit.entities[it->entity_index].qualified_id;
        }
        return file_id;
    };

    for (size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        const std::string_view body = detail::trim(line);
        if (body.empty()) continue;
        const int line_no = static_cast<int>(li) + 1;
        const int indent = indent_of(line);

        close_scopes_to(indent);
        for (auto& end : open_end) end = line_no;

        // import X [as y][, Z] / from M import ...
        if (body.rfind("import ", 0) == 0) {
            std::string_view rest = body.substr(7);
            size_t start = 0;
            for (size_t i = 0; i <= rest.size(); ++i) {
                if (i == rest.size() || rest[i] == ',') {
                    std::string module(detail::trim(rest.substr(start, i - start)));
                    start = i + 1;
                    if (auto as_pos = module.find(" as "); as_pos != std::string::npos) {
                        module = module.substr(0, as_pos);
                    }
                    module = std::string(detail::trim(module));
                    if (!module.empty()) {
                        unit.relations.push_back({RelationKind::Imports, file_id, module, {}});
                    }
                }
            }
            continue;
        }
        if (body.rfind("from ", 0) == 0) {
            std::string_view rest = body.substr(5);
            size_t imp = rest.find(" import ");
            if (imp != std::string::npos) {
                std::string module(detail::trim(rest.substr(0, imp)));
                if (!module.empty()) {
                    unit.relations.push_back({RelationKind::Imports, file_id, module, {}});
                }
            }
            continue;
        }

        // class NAME[(bases)]:
        bool is_class = body.rfind("class ", 0) == 0;
        std::string_view def_rest;
        bool is_def = false;
        if (body.rfind("def ", 0) == 0) {
            is_def = true;
            def_rest = body.substr(4);
        } else if (body.rfind("async def ", 0) == 0) {
            is_def = true;
            def_rest = body.substr(10);
        }

        if (is_class || is_def) {
            std::string_view rest = is_class ? body.substr(6) : def_rest;
            size_t k = 0;
            while (k < rest.size() && ident_char(rest[k])) ++k;
            std::string name(rest.substr(0, k));
            if (!name.empty()) {
                Entity entity;
                entity.kind = is_class ? EntityKind::Class : EntityKind::Function;
                entity.name = name;
                entity.start_line = line_no;
                entity.end_line = line_no;
                const std::string parent = current_scope_id();
                entity.qualified_id = ids.allocate(parent + "::" + name);
                const int index = static_cast<int>(unit.entities.size());
                unit.entities.push_back(entity);
                if (parent != file_id) {
                    unit.relations.push_back(
                        {RelationKind::Contains, parent, entity.qualified_id, {}});
                }
                if (is_class) {
                    size_t open = rest.find('(', k);
                    size_t close = rest.rfind(')');
                    if (open != std::string::npos && close != std::string::npos && close > open) {
                        for (auto& base : split_bases(rest.substr(open + 1, close - open - 1))) {
                            unit.relations.push_back(
                                {RelationKind::Inherits, entity.qualified_id, base, {}});
                        }
                    }
                }
                scopes.push_back({indent, index, entity.kind});
                open_end.push_back(line_no);
                // fall through: the signature line may also contain calls
                // (decorator-default expressions), scanned below
            }
        }

        // Call sites: identifier immediately followed by "(".
        for (size_t i = 0; i < body.size(); ++i) {
            if (!ident_start(body[i])) continue;
            size_t j = i;
            while (j < body.size() && ident_char(body[j])) ++j;
            std::string word(body.substr(i, j - i));
            size_t k = j;
            while (k < body.size() && body[k] == ' ') ++k;
            const bool call = k < body.size() && body[k] == '(';
            // Skip the definition's own name and keywords.
            bool defining = false;
            if (i >= 1) {
                std::string_view before = detail::trim(body.substr(0, i));
                defining = before == "def" || before == "async def" || before == "class";
            }
            if (call && !defining && !keywords.count(word)) {
                unit.relations.push_back(
                    {RelationKind::Invokes, current_scope_id(), word, {}});
            }
            i = j;
        }
    }
    close_scopes_to(0);

    unit.parse_warnings = warnings;
    return unit;
}

}  // namespace multicolor
