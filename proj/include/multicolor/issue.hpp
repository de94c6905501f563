#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multicolor/repo_path.hpp"

namespace multicolor {

/// A semi-structured tracker ticket. Title/description and the three
/// categorical filter fields are always populated; everything else is
/// optional. changed_files is the verified fix location set and may be
/// empty for unresolved issues.
struct Issue {
    std::string id;
    std::string title;
    std::string description;
    std::optional<std::string> root_cause;
    std::optional<std::string> feature_summary;
    std::string program_name;
    std::string triage_category;
    std::string triage_assignment;
    std::optional<int> priority;
    std::optional<int> severity;
    std::optional<std::string> root_cause_category;
    std::optional<std::string> product_family;
    std::optional<std::string> product_name;
    std::string created_at;
    std::vector<RepoPath> changed_files;
};

enum class Richness { Rich, Sparse };

struct RichnessLabel {
    Richness label = Richness::Sparse;
    double completeness_score = 0.0;
};

using IssueStore = std::map<std::string, Issue>;

/// Parses one issue object from a JSON text. Throws Error{InvalidIssue}
/// when required fields are missing/empty or a changed file path is bad.
Issue issue_from_json_text(const std::string& json_text);

std::string issue_to_json_text(const Issue& issue);

/// Loads a JSON-lines corpus (one issue object per line, blank lines
/// ignored). Throws Error{IoError} when the file cannot be read and
/// Error{DuplicateIssueId} on a repeated id.
std::vector<Issue> load_issues_jsonl(const std::string& path);

IssueStore make_issue_store(const std::vector<Issue>& issues);

}  // namespace multicolor
