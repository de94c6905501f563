#include "multicolor/issue.hpp"

#include <fstream>

#include "json.hpp"
#include "multicolor/errors.hpp"

namespace multicolor {

namespace {

using nlohmann::json;

std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    std::string value = it->get<std::string>();
    if (value.empty()) return std::nullopt;
    return value;
}

std::optional<int> opt_int(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<int>();
}

std::string required_string(const json& j, const char* key, const std::string& issue_id) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null() || !it->is_string() || it->get<std::string>().empty()) {
        throw Error(ErrorCode::InvalidIssue,
                    "issue '" + issue_id + "' is missing required field '" + key + "'");
    }
    return it->get<std::string>();
}

}  // namespace

Issue issue_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidIssue, std::string("malformed issue JSON: ") + e.what());
    }

    Issue issue;
    issue.id = required_string(j, "id", "<unknown>");
    issue.title = required_string(j, "title", issue.id);
    issue.description = required_string(j, "description", issue.id);
    issue.program_name = required_string(j, "program_name", issue.id);
    issue.triage_category = required_string(j, "triage_category", issue.id);
    issue.triage_assignment = required_string(j, "triage_assignment", issue.id);
    issue.root_cause = opt_string(j, "root_cause");
    issue.feature_summary = opt_string(j, "feature_summary");
    issue.priority = opt_int(j, "priority");
    issue.severity = opt_int(j, "severity");
    issue.root_cause_category = opt_string(j, "root_cause_category");
    issue.product_family = opt_string(j, "product_family");
    issue.product_name = opt_string(j, "product_name");
    if (auto created = opt_string(j, "created_at")) issue.created_at = *created;

    if (auto it = j.find("changed_files"); it != j.end() && it->is_array()) {
        for (const auto& raw : *it) {
            try {
                issue.changed_files.push_back(parse_repo_path(raw.get<std::string>()));
            } catch (const Error& e) {
                throw Error(ErrorCode::InvalidIssue,
                            "issue '" + issue.id + "' has a bad changed_files entry: " + e.what());
            }
        }
    }
    return issue;
}

std::string issue_to_json_text(const Issue& issue) {
    json j;
    j["id"] = issue.id;
    j["title"] = issue.title;
    j["description"] = issue.description;
    j["program_name"] = issue.program_name;
    j["triage_category"] = issue.triage_category;
    j["triage_assignment"] = issue.triage_assignment;
    if (issue.root_cause) j["root_cause"] = *issue.root_cause;
    if (issue.feature_summary) j["feature_summary"] = *issue.feature_summary;
    if (issue.priority) j["priority"] = *issue.priority;
    if (issue.severity) j["severity"] = *issue.severity;
    if (issue.root_cause_category) j["root_cause_category"] = *issue.root_cause_category;
    if (issue.product_family) j["product_family"] = *issue.product_family;
    if (issue.product_name) j["product_name"] = *issue.product_name;
    if (!issue.created_at.empty()) j["created_at"] = issue.created_at;
    auto files = json::array();
    for (const auto& path : issue.changed_files) files.push_back(path.str());
    j["changed_files"] = files;
    return j.dump();
}

std::vector<Issue> load_issues_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open issue corpus '" + path + "'");
    }
    std::vector<Issue> issues;
    std::string line;
    size_t line_no = 0;
    IssueStore seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Issue issue;
        try {
            issue = issue_from_json_text(line);
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidIssue,
                        path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (seen.count(issue.id)) {
            throw Error(ErrorCode::DuplicateIssueId,
                        "issue id '" + issue.id + "' appears more than once in " + path);
        }
        seen.emplace(issue.id, issue);
        issues.push_back(std::move(issue));
    }
    return issues;
}

IssueStore make_issue_store(const std::vector<Issue>& issues) {
    IssueStore store;
    for (const auto& issue : issues) store.emplace(issue.id, issue);
    return store;
}

}  // namespace multicolor
