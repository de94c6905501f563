#include <algorithm>

#include "multicolor/parse.hpp"
#include "parser_common.hpp"

namespace multicolor {

namespace {

using detail::ident_char;
using detail::ident_start;

const std::set<std::string>& cpp_skip_words() {
    static const std::set<std::string> words = {
        "if",     "for",      "while",   "switch",  "catch",   "return", "sizeof",
        "alignof", "decltype", "throw",  "new",     "delete",  "defined", "void",
        "int",    "bool",     "char",    "float",   "double",  "long",   "short",
        "unsigned", "signed", "auto",    "co_await", "co_return", "co_yield", "and",
        "or",     "not",      "static_assert", "constexpr", "consteval", "constinit",
        "requires", "noexcept", "alignas", "typeid", "typename"};
    return words;
}

// Blanks comments, string/char literals, and preprocessor lines while
// preserving newlines. Include directives are extracted beforehand.
std::string blank_cpp(std::string_view src, int& warnings) {
    std::string out(src);
    const size_t n = out.size();
    size_t i = 0;
    bool at_line_start = true;
    while (i < n) {
        char c = out[i];
        if (at_line_start) {
            size_t k = i;
            while (k < n && (out[k] == ' ' || out[k] == '\t')) ++k;
            if (k < n && out[k] == '#') {
                // blank the directive, honoring backslash continuations
                bool cont = true;
                while (k < n && cont) {
                    cont = false;
                    while (k < n && out[k] != '\n') {
                        if (out[k] == '\\' && k + 1 < n && out[k + 1] == '\n') cont = true;
                        out[k++] = ' ';
                    }
                    if (k < n && cont) ++k;  // keep the newline, continue blanking
                }
                i = k;
                at_line_start = true;
                continue;
            }
        }
        at_line_start = false;
        if (c == '\n') {
            at_line_start = true;
            ++i;
        } else if (c == '/' && i + 1 < n && out[i + 1] == '/') {
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
        } else if (c == 'R' && i + 1 < n && out[i + 1] == '"' &&
                   (i == 0 || !ident_char(out[i - 1]))) {
            size_t d = i + 2;
            while (d < n && out[d] != '(' && out[d] != '\n') ++d;
            std::string close = ")" + out.substr(i + 2, d - (i + 2)) + "\"";
            out[i] = out[i + 1] = ' ';
            size_t j = d;
            size_t end = out.find(close, d);
            if (end == std::string::npos) {
                ++warnings;
                end = n;
            } else {
                end += close.size();
            }
            for (size_t k = j; k < end && k < n; ++k) {
                if (out[k] != '\n') out[k] = ' ';
            }
            i = end;
        } else if (c == '"' || c == '\'') {
            const char quote = c;
            out[i++] = ' ';
            while (i < n && out[i] != quote && out[i] != '\n') {
                if (out[i] == '\\' && i + 1 < n && out[i + 1] != '\n') {
                    out[i] = out[i + 1] = ' ';
                    i += 2;
                } else {
                    out[i++] = ' ';
                }
            }
            if (i < n && out[i] == quote) out[i++] = ' ';
        } else {
            ++i;
        }
    }
    return out;
}

struct Tok {
    enum Type { Ident, Punct, End };
    Type type = End;
    std::string text;
    int line = 0;
};

std::vector<Tok> tokenize(const std::string& text) {
    std::vector<Tok> toks;
    int line = 1;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (ident_start(c)) {
            size_t j = i;
            while (j < n && ident_char(text[j])) ++j;
            toks.push_back({Tok::Ident, text.substr(i, j - i), line});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < n && (ident_char(text[j]) || text[j] == '.')) ++j;
            i = j;  // numeric literal, structurally irrelevant
        } else if (c == ':' && i + 1 < n && text[i + 1] == ':') {
            toks.push_back({Tok::Punct, "::", line});
            i += 2;
        } else {
            toks.push_back({Tok::Punct, std::string(1, c), line});
            i += 1;
        }
    }
    toks.push_back({Tok::End, "", line});
    return toks;
}

struct Scope {
    enum Type { Namespace, Class, Function, Block } type;
    std::string name;   // namespace or class or function name part
    int entity_index;   // -1 when no entity backs the scope
};

struct BaseSpec {
    std::string access;
    std::string name;
};

// Splits a base-specifier token range at top-level commas and extracts
// access/virtual markers plus the qualified base name (template args cut).
std::vector<BaseSpec> parse_bases(const std::vector<Tok>& toks, size_t begin, size_t end,
                                  const std::string& default_access) {
    std::vector<BaseSpec> bases;
    size_t start = begin;
    int angle = 0, paren = 0;
    for (size_t i = begin; i <= end; ++i) {
        const bool at_end = (i == end);
        if (!at_end && toks[i].type == Tok::Punct) {
            const std::string& p = toks[i].text;
            if (p == "<") ++angle;
            else if (p == ">") angle = std::max(0, angle - 1);
            else if (p == "(") ++paren;
            else if (p == ")") paren = std::max(0, paren - 1);
        }
        if (at_end || (toks[i].type == Tok::Punct && toks[i].text == "," && angle == 0 && paren == 0)) {
            BaseSpec base;
            base.access = default_access;
            std::string name;
            for (size_t k = start; k < i; ++k) {
                if (toks[k].type == Tok::Ident) {
                    const std::string& w = toks[k].text;
                    if (w == "public" || w == "protected" || w == "private") {
                        base.access = w;
                        continue;
                    }
                    if (w == "virtual") continue;
                    if (!name.empty() && !(toks[k - 1].type == Tok::Punct && toks[k - 1].text == "::"))
                        break;  // second independent name; malformed, stop
                    if (!name.empty()) name += "::";
                    name += w;
                } else if (toks[k].text == "<") {
                    break;  // template arguments begin; name is complete
                } else if (toks[k].text != "::") {
                    break;
                }
            }
            if (!name.empty()) {
                base.name = name;
                bases.push_back(base);
            }
            start = i + 1;
        }
    }
    return bases;
}

}  // namespace

ParsedUnit parse_cpp(const RepoPath& file, std::string_view source) {
    ParsedUnit unit;
    unit.file = file;
    unit.language = Language::Cpp;
    const std::string file_id = file.str();

    // Includes come from the raw text; the cleaning pass blanks directives.
    {
        const auto raw_lines = detail::split_lines(source);
        for (const auto& line : raw_lines) {
            std::string_view body = detail::trim(line);
            if (body.empty() || body[0] != '#') continue;
            body.remove_prefix(1);
            body = detail::trim(body);
            if (body.rfind("include", 0) != 0) continue;
            body.remove_prefix(7);
            body = detail::trim(body);
            if (body.empty()) continue;
            char open = body[0];
            char close = (open == '"') ? '"' : (open == '<') ? '>' : '\0';
            if (close == '\0') continue;
            size_t endpos = body.find(close, 1);
            if (endpos == std::string::npos || endpos == 1) continue;
            Relation rel{RelationKind::Imports, file_id, std::string(body.substr(1, endpos - 1)), {}};
            rel.attrs["style"] = (open == '"') ? "quote" : "angle";
            unit.relations.push_back(std::move(rel));
        }
    }

    int warnings = 0;
    const std::string cleaned = blank_cpp(source, warnings);
    const auto toks = tokenize(cleaned);
    const auto& skip_words = cpp_skip_words();

    detail::IdAllocator ids;
    std::vector<Scope> scopes;

    auto scope_prefix = [&]() {
        std::string prefix = file_id;
        for (const auto& s : scopes) {
            if ((s.type == Scope::Namespace || s.type == Scope::Class) && !s.name.empty()) {
                prefix += "::" + s.name;
            }
        }
        return prefix;
    };
    auto context = [&]() -> Scope::Type {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->type != Scope::Block) return it->type;
        }
        return Scope::Namespace;  // file scope behaves like a namespace
    };
    auto enclosing_entity_id = [&]() -> std::string {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->entity_index >= 0) return unit.entities[it->entity_index].qualified_id;
        }
        return file_id;
    };
    auto enclosing_class_index = [&]() -> int {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            if (it->type == Scope::Block) continue;
            if (it->type == Scope::Class) return it->entity_index;
            return -1;
        }
        return -1;
    };

    // Skips a balanced (...) group; braces inside (lambdas) are swallowed.
    auto skip_parens = [&](size_t pos) -> size_t {
        int depth = 0;
        for (; pos < toks.size() && toks[pos].type != Tok::End; ++pos) {
            if (toks[pos].type != Tok::Punct) continue;
            if (toks[pos].text == "(") ++depth;
            else if (toks[pos].text == ")") {
                if (--depth == 0) return pos + 1;
            }
        }
        return pos;
    };
    auto skip_angles = [&](size_t pos) -> size_t {
        int depth = 0;
        for (; pos < toks.size() && toks[pos].type != Tok::End; ++pos) {
            if (toks[pos].type != Tok::Punct) continue;
            if (toks[pos].text == "<") ++depth;
            else if (toks[pos].text == ">") {
                if (--depth == 0) return pos + 1;
            } else if (toks[pos].text == ";" || toks[pos].text == "{") {
                break;  // not a template argument list after all
            }
        }
        return pos;
    };

    size_t pos = 0;
    while (toks[pos].type != Tok::End) {
        const Tok& tok = toks[pos];

        if (tok.type == Tok::Punct) {
            if (tok.text == "{") {
                scopes.push_back({Scope::Block, "", -1});
            } else if (tok.text == "}") {
                if (!scopes.empty()) {
                    if (scopes.back().entity_index >= 0) {
                        unit.entities[scopes.back().entity_index].end_line = tok.line;
                    }
                    scopes.pop_back();
                }
            }
            ++pos;
            continue;
        }

        const std::string& word = tok.text;

        if (word == "template") {
            ++pos;
            if (toks[pos].type == Tok::Punct && toks[pos].text == "<") pos = skip_angles(pos);
            continue;
        }

        if (word == "namespace") {
            size_t p = pos + 1;
            std::string name;
            while (toks[p].type == Tok::Ident || (toks[p].type == Tok::Punct && toks[p].text == "::")) {
                name += toks[p].text;
                ++p;
            }
            if (toks[p].type == Tok::Punct && toks[p].text == "{") {
                scopes.push_back({Scope::Namespace, name, -1});
                pos = p + 1;
            } else {
                pos = p;  // namespace alias or using; skip
            }
            continue;
        }

        if (word == "enum") {
            ++pos;
            if (toks[pos].type == Tok::Ident && (toks[pos].text == "class" || toks[pos].text == "struct"))
                ++pos;
            continue;  // the body brace becomes a plain block
        }

        if ((word == "class" || word == "struct") && context() != Scope::Function) {
            size_t p = pos + 1;
            std::string name;
            while (toks[p].type == Tok::Ident || (toks[p].type == Tok::Punct && toks[p].text == "::")) {
                if (toks[p].type == Tok::Ident && toks[p].text == "final") break;
                name += toks[p].text;
                ++p;
            }
            // Find which of '{', ';', '(' comes first to rule out forward
            // declarations and variable declarations of class type.
            size_t q = p;
            size_t colon = 0;
            bool is_definition = false;
            while (toks[q].type != Tok::End) {
                if (toks[q].type == Tok::Punct) {
                    const std::string& t = toks[q].text;
                    if (t == "{") {
                        is_definition = true;
                        break;
                    }
                    if (t == ";" || t == "(" || t == ")" || t == ",") break;
                    if (t == ":" && colon == 0) colon = q;
                    if (t == "<") {
                        q = skip_angles(q);
                        continue;
                    }
                }
                ++q;
            }
            if (!name.empty() && is_definition) {
                Entity entity;
                entity.kind = EntityKind::Class;
                entity.name = name.substr(name.rfind("::") == std::string::npos
                                              ? 0
                                              : name.rfind("::") + 2);
                entity.start_line = tok.line;
                entity.end_line = tok.line;
                entity.qualified_id = ids.allocate(scope_prefix() + "::" + name);
                const int index = static_cast<int>(unit.entities.size());
                const int parent_class = enclosing_class_index();
                unit.entities.push_back(entity);
                if (parent_class >= 0) {
                    unit.relations.push_back({RelationKind::Contains,
                                              unit.entities[parent_class].qualified_id,
                                              entity.qualified_id,
                                              {}});
                }
                if (colon != 0) {
                    const std::string default_access = (word == "struct") ? "public" : "private";
                    for (auto& base : parse_bases(toks, colon + 1, q, default_access)) {
                        Relation rel{RelationKind::Inherits, entity.qualified_id, base.name, {}};
                        rel.attrs["access"] = base.access;
                        unit.relations.push_back(std::move(rel));
                    }
                }
                scopes.push_back({Scope::Class, name, index});
                pos = q + 1;  // past '{'
            } else {
                pos = p;
            }
            continue;
        }

        // Qualified name, possibly a function definition/declaration or call.
        if (skip_words.count(word)) {
            ++pos;
            continue;
        }
        {
            size_t p = pos;
            std::string name;
            bool prev_tilde = pos > 0 && toks[pos - 1].type == Tok::Punct && toks[pos - 1].text == "~";
            while (true) {
                if (toks[p].type != Tok::Ident) break;
                if (toks[p].text == "operator") {
                    std::string op = "operator";
                    ++p;
                    while (toks[p].type == Tok::Punct && toks[p].text != "(") {
                        op += toks[p].text;
                        ++p;
                    }
                    if (op == "operator" && toks[p].type == Tok::Punct && toks[p].text == "(" &&
                        toks[p + 1].type == Tok::Punct && toks[p + 1].text == ")") {
                        op += "()";
                        p += 2;
                    }
                    name += name.empty() ? op : "::" + op;
                    break;
                }
                name += toks[p].text;
                ++p;
                if (toks[p].type == Tok::Punct && toks[p].text == "::") {
                    name += "::";
                    ++p;
                    if (toks[p].type == Tok::Punct && toks[p].text == "~") {
                        name += "~";
                        ++p;
                    }
                    continue;
                }
                break;
            }
            if (name.empty()) {
                ++pos;
                continue;
            }
            if (prev_tilde) name = "~" + name;

            if (!(toks[p].type == Tok::Punct && toks[p].text == "(")) {
                ++pos;  // re-examine the remainder of a qualified name chain
                continue;
            }

            const Scope::Type ctx = context();
            if (ctx == Scope::Function) {
                std::string terminal = name.substr(
                    name.rfind("::") == std::string::npos ? 0 : name.rfind("::") + 2);
                if (!skip_words.count(terminal)) {
                    unit.relations.push_back(
                        {RelationKind::Invokes, enclosing_entity_id(), terminal, {}});
                }
                pos = p + 1;  // descend into the argument list for nested calls
                continue;
            }

            size_t after = skip_parens(p);
            // Swallow trailing qualifiers up to the declaration terminator.
            size_t q = after;
            bool is_body = false, is_decl = false;
            while (toks[q].type != Tok::End) {
                if (toks[q].type == Tok::Punct) {
                    const std::string& t = toks[q].text;
                    if (t == "{") {
                        is_body = true;
                        break;
                    }
                    if (t == ";") {
                        is_decl = true;
                        break;
                    }
                    if (t == "(") {  // noexcept(...)
                        q = skip_parens(q);
                        continue;
                    }
                    if (t == ":") {  // constructor initializer list
                        ++q;
                        int depth = 0;
                        while (toks[q].type != Tok::End) {
                            if (toks[q].type == Tok::Punct) {
                                const std::string& u = toks[q].text;
                                if (u == "(") { q = skip_parens(q); continue; }
                                if (u == "{" && depth == 0) {
                                    // distinguish brace-init member from body:
                                    // a body brace follows ')' or '}' or ident-less position
                                    // heuristic: treat as init braces when previous token is Ident
                                    if (toks[q - 1].type == Tok::Ident) {
                                        int b = 0;
                                        while (toks[q].type != Tok::End) {
                                            if (toks[q].type == Tok::Punct) {
                                                if (toks[q].text == "{") ++b;
                                                else if (toks[q].text == "}" && --b == 0) { ++q; break; }
                                            }
                                            ++q;
                                        }
                                        continue;
                                    }
                                    break;
                                }
                                if (u == ";") break;
                            }
                            if (toks[q].type == Tok::Punct && toks[q].text == "{") break;
                            ++q;
                        }
                        continue;
                    }
                    if (t == "=" || t == "," || t == ")") break;  // = default / declarator list
                    if (t == "-" || t == ">" || t == "&" || t == "*" || t == "::" || t == "<") {
                        if (t == "<") { q = skip_angles(q); continue; }
                        ++q;
                        continue;
                    }
                    break;
                }
                ++q;
            }
            const bool at_class = (ctx == Scope::Class);
            const bool make_entity = is_body || (at_class && is_decl);
            if (make_entity && !skip_words.count(name)) {
                Entity entity;
                entity.kind = EntityKind::Function;
                entity.name = name.substr(
                    name.rfind("::") == std::string::npos ? 0 : name.rfind("::") + 2);
                entity.start_line = tok.line;
                entity.end_line = is_decl ? toks[q].line : tok.line;
                entity.qualified_id = ids.allocate(scope_prefix() + "::" + name);
                const int index = static_cast<int>(unit.entities.size());
                const int parent_class = enclosing_class_index();
                unit.entities.push_back(entity);
                if (parent_class >= 0) {
                    unit.relations.push_back({RelationKind::Contains,
                                              unit.entities[parent_class].qualified_id,
                                              entity.qualified_id,
                                              {}});
                }
                if (is_body) {
                    scopes.push_back({Scope::Function, name, index});
                    pos = q + 1;  // past '{'
                } else {
                    pos = q + 1;  // past ';'
                }
                continue;
            }
            pos = (is_body || is_decl) ? q : after;
            continue;
        }
    }

    // Close anything left open (unbalanced braces).
    const int last_line = toks.empty() ? 1 : toks.back().line;
    while (!scopes.empty()) {
        if (scopes.back().entity_index >= 0) {
            unit.entities[scopes.back().entity_index].end_line = last_line;
        }
        scopes.pop_back();
        ++warnings;
    }

    unit.parse_warnings = warnings;
    return unit;
}

}  // namespace multicolor
