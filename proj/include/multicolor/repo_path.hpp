#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace multicolor {

enum class Language { Python, Cpp, Qml, Other };
enum class EntityKind { Directory, File, Class, Function, QmlComponent };
enum class RelationKind { Contains, Imports, Inherits, Invokes };

const char* to_string(Language lang);
const char* to_string(EntityKind kind);
const char* to_string(RelationKind kind);
Language language_from_string(std::string_view s);
EntityKind entity_kind_from_string(std::string_view s);
RelationKind relation_kind_from_string(std::string_view s);

/// A repository file path decomposed into component (repository name),
/// intermediate directory segments, and base filename. Canonical separator
/// is "/" regardless of the platform the path came from.
struct RepoPath {
    std::string component;
    std::vector<std::string> segments;
    std::string filename;

    /// Canonical string form: component/seg1/.../filename.
    std::string str() const;

    /// Substring of filename after the last "."; empty when no "." is present.
    std::string extension() const;

    bool operator==(const RepoPath&) const = default;
    auto operator<=>(const RepoPath&) const = default;
};

/// Decomposes a raw path. Accepts both "/" and "\\" separators; empty parts
/// (duplicate or trailing separators) are dropped.
/// Throws Error{EmptyPath} on an empty or separator-only input and
/// Error{IllegalSegment} when any segment is "." or "..".
RepoPath parse_repo_path(std::string_view raw);

/// Extension-based language detection, case-insensitive.
Language detect_language(const RepoPath& path);

std::string ascii_lower(std::string_view s);

/// True when `path` equals `prefix` or starts with `prefix` at a "/" boundary.
bool path_has_prefix(std::string_view path, std::string_view prefix);

}  // namespace multicolor
