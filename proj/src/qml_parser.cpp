#include <algorithm>

#include "multicolor/parse.hpp"
#include "parser_common.hpp"

namespace multicolor {

namespace {

using detail::ident_char;
using detail::ident_start;

void extract_imports(const RepoPath& file, std::string_view source, ParsedUnit& unit) {
    const std::string file_id = file.str();
    for (const auto& line : detail::split_lines(source)) {
        std::string_view body = detail::trim(line);
        if (body.rfind("import ", 0) != 0) continue;
        body = detail::trim(body.substr(7));
        if (body.empty()) continue;
        Relation rel{RelationKind::Imports, file_id, "", {}};
        if (body[0] == '"') {
            size_t end = body.find('"', 1);
            if (end == std::string::npos || end == 1) continue;
            rel.dst_ref = std::string(body.substr(1, end - 1));
            rel.attrs["style"] = "path";
        } else {
            size_t end = 0;
            while (end < body.size() && (ident_char(body[end]) || body[end] == '.')) ++end;
            if (end == 0) continue;
            rel.dst_ref = std::string(body.substr(0, end));
            rel.attrs["style"] = "module";
        }
        unit.relations.push_back(std::move(rel));
    }
}

// Blanks //, /* */ comments and string literals (", ', `), keeping newlines.
std::string blank_qml(std::string_view src, int& warnings) {
    std::string out(src);
    const size_t n = out.size();
    size_t i = 0;
    while (i < n) {
        char c = out[i];
        if (c == '/' && i + 1 < n && out[i + 1] == '/') {
            while (i < n && out[i] != '\n') out[i++] = ' ';
        } else if (c == '/' && i + 1 < n && out[i + 1] == '*') {
            out[i] = out[i + 1] = ' ';
            i += 2;
            bool closed = false;
            while (i < n) {
                if (out[i] == '*' && i + 1 < n && out[i + 1] == '/') {
                    out[i] = out[i + 1] = ' ';
                    i += 2;
                    closed = true;
                    break;
                }
                if (out[i] != '\n') out[i] = ' ';
                ++i;
            }
            if (!closed) ++warnings;
        } else if (c == '"' || c == '\'' || c == '`') {
            const char quote = c;
            out[i++] = ' ';
            while (i < n && out[i] != quote) {
                if (out[i] == '\\' && i + 1 < n && out[i + 1] != '\n') {
                    out[i] = out[i + 1] = ' ';
                    i += 2;
                    continue;
                }
                if (quote != '`' && out[i] == '\n') break;  // unterminated line string
                if (out[i] != '\n') out[i] = ' ';
                ++i;
            }
            if (i < n && out[i] == quote) out[i++] = ' ';
        } else {
            ++i;
        }
    }
    return out;
}

struct QmlScope {
    enum Type { Component, Function, Block } type;
    int entity_index;  // -1 for plain blocks
};

struct QmlScan {
    ParsedUnit unit;
    bool well_formed = true;
};

// Structured scan: tracks the object/function nesting through balanced
// braces and records property bindings as node attributes.
QmlScan scan_qml(const RepoPath& file, std::string_view source) {
    QmlScan scan;
    scan.unit.file = file;
    scan.unit.language = Language::Qml;
    extract_imports(file, source, scan.unit);

    int warnings = 0;
    const std::string cleaned = blank_qml(source, warnings);
    const std::string file_id = file.str();

    detail::IdAllocator ids;
    std::vector<QmlScope> scopes;
    std::vector<int> binding_counts;  // parallel to entities

    auto scope_id = [&]() -> std::string {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->entity_index >= 0) return scan.unit.entities[it->entity_index].qualified_id;
        }
        return file_id;
    };
    auto component_context = [&]() -> int {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->type == QmlScope::Block) continue;
            if (it->type == QmlScope::Component) return it->entity_index;
            return -1;
        }
        return -1;
    };

    int line = 1;
    size_t i = 0;
    const size_t n = cleaned.size();
    auto skip_ws = [&](size_t k) {
        while (k < n && (cleaned[k] == ' ' || cleaned[k] == '\t' || cleaned[k] == '\r')) ++k;
        return k;
    };

    while (i < n) {
        const char c = cleaned[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == '{') {
            scopes.push_back({QmlScope::Block, -1});
            ++i;
            continue;
        }
        if (c == '}') {
            if (scopes.empty()) {
                scan.well_formed = false;
            } else {
                if (scopes.back().entity_index >= 0) {
                    scan.unit.entities[scopes.back().entity_index].end_line = line;
                }
                scopes.pop_back();
            }
            ++i;
            continue;
        }
        if (!ident_start(c)) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < n && ident_char(j < n ? cleaned[j] : ' ')) ++j;
        const std::string word = cleaned.substr(i, j - i);

        if (word == "import") {  // already extracted from raw text
            while (j < n && cleaned[j] != '\n') ++j;
            i = j;
            continue;
        }

        if (word == "function") {
            size_t k = skip_ws(j);
            size_t e = k;
            while (e < n && ident_char(cleaned[e])) ++e;
            if (e > k) {
                const std::string name = cleaned.substr(k, e - k);
                Entity entity;
                entity.kind = EntityKind::Function;
                entity.name = name;
                entity.start_line = line;
                entity.end_line = line;
                const std::string parent = scope_id();
                entity.qualified_id = ids.allocate(parent + "::" + name);
                const int index = static_cast<int>(scan.unit.entities.size());
                scan.unit.entities.push_back(entity);
                binding_counts.push_back(0);
                if (parent != file_id) {
                    scan.unit.relations.push_back(
                        {RelationKind::Contains, parent, entity.qualified_id, {}});
                }
                // advance to the body brace
                size_t b = e;
                int paren = 0;
                while (b < n) {
                    if (cleaned[b] == '(') ++paren;
                    else if (cleaned[b] == ')') --paren;
                    else if (cleaned[b] == '{' && paren == 0) break;
                    else if (cleaned[b] == '\n') ++line;
                    ++b;
                }
                if (b < n) {
                    scopes.push_back({QmlScope::Function, index});
                    i = b + 1;
                    continue;
                }
                scan.well_formed = false;
                i = e;
                continue;
            }
            i = j;
            continue;
        }

        // Object declaration: Uppercase type name directly before '{'.
        if (std::isupper(static_cast<unsigned char>(c))) {
            size_t k = skip_ws(j);
            if (k < n && cleaned[k] == '{') {
                Entity entity;
                entity.kind = EntityKind::QmlComponent;
                entity.name = word;
                entity.start_line = line;
                entity.end_line = line;
                const std::string parent = scope_id();
                entity.qualified_id = ids.allocate(parent + "::" + word);
                const int index = static_cast<int>(scan.unit.entities.size());
                scan.unit.entities.push_back(entity);
                binding_counts.push_back(0);
                if (parent != file_id) {
                    scan.unit.relations.push_back(
                        {RelationKind::Contains, parent, entity.qualified_id, {}});
                }
                scopes.push_back({QmlScope::Component, index});
                i = k + 1;
                continue;
            }
        }

        // Property binding: identifier followed by ':' at component scope.
        {
            size_t k = skip_ws(j);
            if (k < n && cleaned[k] == ':') {
                const int comp = component_context();
                if (comp >= 0) ++binding_counts[comp];
                i = k + 1;
                continue;
            }
        }
        i = j;
    }

    if (!scopes.empty()) scan.well_formed = false;
    while (!scopes.empty()) {
        if (scopes.back().entity_index >= 0) {
            scan.unit.entities[scopes.back().entity_index].end_line = line;
        }
        scopes.pop_back();
    }
    for (size_t e = 0; e < scan.unit.entities.size(); ++e) {
        if (scan.unit.entities[e].kind == EntityKind::QmlComponent && binding_counts[e] > 0) {
            scan.unit.entities[e].attrs["bindings"] = std::to_string(binding_counts[e]);
        }
    }
    scan.unit.parse_warnings = warnings;
    return scan;
}

}  // namespace

ParsedUnit parse_qml_fallback(const RepoPath& file, std::string_view source) {
    ParsedUnit unit;
    unit.file = file;
    unit.language = Language::Qml;
    unit.used_fallback = true;
    extract_imports(file, source, unit);

    int warnings = 0;
    const std::string cleaned = blank_qml(source, warnings);
    const std::string file_id = file.str();
    const auto lines = detail::split_lines(cleaned);

    detail::IdAllocator ids;
    // stack of entity indices; -1 marks a brace with no entity behind it
    std::vector<int> stack;
    auto parent_id = [&]() -> std::string {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            if (*it >= 0) return unit.entities[*it].qualified_id;
        }
        return file_id;
    };

    for (size_t li = 0; li < lines.size(); ++li) {
        const std::string& text = lines[li];
        const int line_no = static_cast<int>(li) + 1;
        size_t i = 0;
        while (i < text.size()) {
            const char c = text[i];
            if (c == '{') {
                stack.push_back(-1);
                ++i;
                continue;
            }
            if (c == '}') {
                if (!stack.empty()) {
                    if (stack.back() >= 0) unit.entities[stack.back()].end_line = line_no;
                    stack.pop_back();
                }
                ++i;
                continue;
            }
            if (!ident_start(c)) {
                ++i;
                continue;
            }
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            const std::string word = text.substr(i, j - i);
            size_t k = j;
            while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;

            if (word == "function") {
                size_t e = k;
                while (e < text.size() && ident_char(text[e])) ++e;
                if (e > k) {
                    Entity entity;
                    entity.kind = EntityKind::Function;
                    entity.name = text.substr(k, e - k);
                    entity.start_line = line_no;
                    entity.end_line = line_no;
                    const std::string parent = parent_id();
                    entity.qualified_id = ids.allocate(parent + "::" + entity.name);
                    const int index = static_cast<int>(unit.entities.size());
                    unit.entities.push_back(entity);
                    if (parent != file_id) {
                        unit.relations.push_back(
                            {RelationKind::Contains, parent, entity.qualified_id, {}});
                    }
                    // pattern mode treats the next '{' on the line as the body
                    size_t b = e;
                    while (b < text.size() && text[b] != '{') ++b;
                    stack.push_back(index);
                    i = (b < text.size()) ? b + 1 : e;
                    continue;
                }
            } else if (std::isupper(static_cast<unsigned char>(c)) && k < text.size() &&
                       text[k] == '{') {
                Entity entity;
                entity.kind = EntityKind::QmlComponent;
                entity.name = word;
                entity.start_line = line_no;
                entity.end_line = line_no;
                const std::string parent = parent_id();
                entity.qualified_id = ids.allocate(parent + "::" + word);
                const int index = static_cast<int>(unit.entities.size());
                unit.entities.push_back(entity);
                if (parent != file_id) {
                    unit.relations.push_back(
                        {RelationKind::Contains, parent, entity.qualified_id, {}});
                }
                stack.push_back(index);
                i = k + 1;
                continue;
            }
            i = j;
        }
    }
    unit.parse_warnings = warnings + 1;  // fallback itself counts as a warning
    return unit;
}

ParsedUnit parse_qml(const RepoPath& file, std::string_view source) {
    QmlScan scan = scan_qml(file, source);
    if (scan.well_formed) return scan.unit;
    return parse_qml_fallback(file, source);
}

ParsedUnit parse_source(const RepoPath& file, std::string_view source) {
    switch (detect_language(file)) {
        case Language::Python: return parse_python(file, source);
        case Language::Cpp: return parse_cpp(file, source);
        case Language::Qml: return parse_qml(file, source);
        case Language::Other: break;
    }
    ParsedUnit unit;
    unit.file = file;
    unit.language = Language::Other;
    return unit;
}

bool relation_legal_for(Language lang, RelationKind kind) {
    switch (kind) {
        case RelationKind::Contains:
        case RelationKind::Imports:
            return true;
        case RelationKind::Inherits:
        case RelationKind::Invokes:
            return lang == Language::Python || lang == Language::Cpp;
    }
    return false;
}

}  // namespace multicolor
