#pragma once

#include <map>
#include <string>
#include <vector>

#include "multicolor/issue.hpp"
#include "multicolor/repo_path.hpp"

namespace multicolor {

struct EvalRecord {
    std::string issue_id;
    std::vector<RepoPath> ground_truth;
    std::vector<RepoPath> predicted;  // ranked
    size_t tool_calls = 0;
    RichnessLabel richness;
};

/// Fraction of records whose top-k predictions intersect the ground truth;
/// comparison is full canonical path equality. Throws Error{EmptyCorpus}.
double acc_at_k(const std::vector<EvalRecord>& records, int k);

/// Fraction of queries where any retrieved issue shares a changed-file
/// *filename* with the query's ground truth (the file_match indicator).
/// Throws Error{EmptyCorpus} when there are no queries.
double sic_match_rate(const std::vector<Issue>& query_issues,
                      const std::map<std::string, std::vector<std::string>>& retrieved_map,
                      const IssueStore& corpus);

/// completeness = populated optional fields / 7, averaged with a verbosity
/// term min(1, description_tokens / verbosity_scale). RICH iff the score
/// reaches the threshold.
RichnessLabel classify_richness(const Issue& issue, double threshold = 0.5,
                                int verbosity_scale = 50);

struct CodeTermHistogram {
    size_t zero = 0;
    size_t one = 0;
    size_t two_to_five = 0;
    size_t more_than_five = 0;

    size_t total() const { return zero + one + two_to_five + more_than_five; }
};

/// Buckets count_code_terms(title + " " + description) per issue.
CodeTermHistogram code_term_histogram(const std::vector<Issue>& issues);

}  // namespace multicolor
