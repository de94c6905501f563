#pragma once

#include <map>
#include <string>
#include <vector>

#include "multicolor/repo_path.hpp"

namespace multicolor {

struct Entity {
    EntityKind kind = EntityKind::Function;
    std::string name;
    int start_line = 1;
    int end_line = 1;
    std::string qualified_id;
    std::map<std::string, std::string> attrs;
};

/// A relation extracted from one file. dst_ref may be unresolved (a module
/// path, include target, or bare symbol name); resolution happens at graph
/// build time and unresolved references are dropped there.
struct Relation {
    RelationKind kind = RelationKind::Contains;
    std::string src_qualified_id;
    std::string dst_ref;
    std::map<std::string, std::string> attrs;
};

struct ParsedUnit {
    RepoPath file;
    Language language = Language::Other;
    std::vector<Entity> entities;
    std::vector<Relation> relations;
    int parse_warnings = 0;
    bool used_fallback = false;
};

/// Per Relationship-type legality: CONTAINS and IMPORTS everywhere,
/// INHERITS and INVOKES only for Python and C++.
bool relation_legal_for(Language lang, RelationKind kind);

ParsedUnit parse_python(const RepoPath& file, std::string_view source);
ParsedUnit parse_cpp(const RepoPath& file, std::string_view source);
ParsedUnit parse_qml(const RepoPath& file, std::string_view source);

/// Pattern-based QML extraction used when the structured parse fails;
/// exposed separately so it can be checked against the structured path.
ParsedUnit parse_qml_fallback(const RepoPath& file, std::string_view source);

/// Dispatches on detect_language(file); Other yields an empty unit.
ParsedUnit parse_source(const RepoPath& file, std::string_view source);

}  // namespace multicolor
