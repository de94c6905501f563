#pragma once

#include <map>
#include <string>
#include <vector>

#include "multicolor/embed.hpp"
#include "multicolor/issue.hpp"

namespace multicolor {

enum class SicMode { Embed, Summ };

const char* to_string(SicMode mode);

struct IssueEntry {
    std::string issue_id;
    std::vector<double> vector;
    std::string program_name;
    std::string triage_category;
    std::string triage_assignment;
};

/// Embedded, metadata-filtered store of historical issues. Entries are
/// kept sorted by issue id; retrieval is an exact filtered cosine scan.
struct IssueIndex {
    SicMode mode = SicMode::Embed;
    int dimension = 0;
    std::string embedder_fingerprint;
    std::vector<IssueEntry> entries;
};

/// Localization cues distilled from the retrieved issues' fix locations.
/// Multiset counts reflect how many retrieved issues touch each
/// component / directory prefix / file.
struct SicCue {
    std::vector<std::pair<std::string, double>> similar_issues;  // (id, cosine), non-increasing
    std::map<std::string, int> candidate_components;
    std::map<std::string, int> candidate_directories;
    std::map<std::string, int> candidate_files;
    std::vector<std::string> summaries;
};

/// EMBED: title + "\n" + description. SUMM: the summarizer output over all
/// populated fields.
std::string build_issue_text(const Issue& issue, SicMode mode, const Summarizer& summarizer);

/// Embeds every issue. Throws Error{DuplicateIssueId} on a repeated id and
/// Error{DimensionMismatch} when the embedder returns the wrong dimension.
IssueIndex index_issues(const std::vector<Issue>& issues, SicMode mode, const Embedder& embedder,
                        const Summarizer& summarizer);

/// Filtered top-k cosine retrieval. Candidates must share program name,
/// triage category, and triage assignment with the query; the query itself
/// is excluded when present. Ties break on issue id.
std::vector<std::pair<std::string, double>> retrieve_similar(const IssueIndex& idx,
                                                             const Issue& query, int k,
                                                             const Embedder& embedder,
                                                             const Summarizer& summarizer);

/// Derives components, directory prefix chains, and exact files from the
/// retrieved issues' changed files; each issue contributes each distinct
/// value once. Throws Error{UnknownIssue} for ids missing from the corpus.
SicCue extract_cues(const std::vector<std::pair<std::string, double>>& retrieved,
                    const IssueStore& corpus);

std::string sic_index_to_json(const IssueIndex& idx);
IssueIndex sic_index_from_json(const std::string& text);
void save_sic_index(const IssueIndex& idx, const std::string& path);

/// Throws Error{FingerprintMismatch} when `expected_fingerprint` is
/// non-empty and differs from the stored one.
IssueIndex load_sic_index(const std::string& path, const std::string& expected_fingerprint = "");

}  // namespace multicolor
