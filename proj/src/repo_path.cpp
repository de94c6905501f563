#include "multicolor/repo_path.hpp"

#include <algorithm>
#include <cctype>

#include "multicolor/errors.hpp"

namespace multicolor {

const char* to_string(Language lang) {
    switch (lang) {
        case Language::Python: return "PYTHON";
        case Language::Cpp: return "CPP";
        case Language::Qml: return "QML";
        case Language::Other: return "OTHER";
    }
    return "OTHER";
}

const char* to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::Directory: return "DIRECTORY";
        case EntityKind::File: return "FILE";
        case EntityKind::Class: return "CLASS";
        case EntityKind::Function: return "FUNCTION";
        case EntityKind::QmlComponent: return "QML_COMPONENT";
    }
    return "FILE";
}

const char* to_string(RelationKind kind) {
    switch (kind) {
        case RelationKind::Contains: return "CONTAINS";
        case RelationKind::Imports: return "IMPORTS";
        case RelationKind::Inherits: return "INHERITS";
        case RelationKind::Invokes: return "INVOKES";
    }
    return "CONTAINS";
}

Language language_from_string(std::string_view s) {
    if (s == "PYTHON") return Language::Python;
    if (s == "CPP") return Language::Cpp;
    if (s == "QML") return Language::Qml;
    return Language::Other;
}

EntityKind entity_kind_from_string(std::string_view s) {
    if (s == "DIRECTORY") return EntityKind::Directory;
    if (s == "CLASS") return EntityKind::Class;
    if (s == "FUNCTION") return EntityKind::Function;
    if (s == "QML_COMPONENT") return EntityKind::QmlComponent;
    return EntityKind::File;
}

RelationKind relation_kind_from_string(std::string_view s) {
    if (s == "IMPORTS") return RelationKind::Imports;
    if (s == "INHERITS") return RelationKind::Inherits;
    if (s == "INVOKES") return RelationKind::Invokes;
    return RelationKind::Contains;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string RepoPath::str() const {
    std::string out = component;
    for (const auto& seg : segments) {
        out += '/';
        out += seg;
    }
    out += '/';
    out += filename;
    return out;
}

std::string RepoPath::extension() const {
    auto pos = filename.rfind('.');
    if (pos == std::string::npos) return "";
    return filename.substr(pos + 1);
}

RepoPath parse_repo_path(std::string_view raw) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : raw) {
        if (c == '/' || c == '\\') {
            if (!current.empty()) {
                parts.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) parts.push_back(std::move(current));

    if (parts.empty()) {
        throw Error(ErrorCode::EmptyPath, "path is empty or contains only separators");
    }
    for (const auto& part : parts) {
        if (part == "." || part == "..") {
            throw Error(ErrorCode::IllegalSegment, "segment '" + part + "' is not allowed");
        }
    }

    RepoPath path;
    path.component = parts.front();
    path.filename = parts.back();
    if (parts.size() > 2) {
        path.segments.assign(parts.begin() + 1, parts.end() - 1);
    }
    return path;
}

Language detect_language(const RepoPath& path) {
    const std::string ext = ascii_lower(path.extension());
    if (ext == "py") return Language::Python;
    if (ext == "cpp" || ext == "cc" || ext == "cxx" || ext == "h" || ext == "hpp") {
        return Language::Cpp;
    }
    if (ext == "qml") return Language::Qml;
    return Language::Other;
}

bool path_has_prefix(std::string_view path, std::string_view prefix) {
    if (prefix.empty()) return false;
    if (path.size() < prefix.size()) return false;
    if (path.compare(0, prefix.size(), prefix) != 0) return false;
    return path.size() == prefix.size() || path[prefix.size()] == '/';
}

}  // namespace multicolor
