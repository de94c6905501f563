#pragma once

#include <map>
#include <string>
#include <vector>

#include "multicolor/repo_path.hpp"

namespace multicolor {

/// Five-level score for one (root file, similar file) pair. The directory
/// term is fractional; the others are 0/1 indicators.
struct PairLevelScores {
    int component_match = 0;
    int top_dir_match = 0;
    double directory_similarity = 0.0;
    int extension_match = 0;
    int exact_file_match = 0;

    double total() const {
        return component_match + top_dir_match + directory_similarity + extension_match +
               exact_file_match;
    }
};

/// Level scoring between two changed-file paths:
///  - component_match: first path segments equal
///  - top_dir_match: first directory segments equal (when the root file has
///    no directory segments: 1 iff the other has none and components match)
///  - directory_similarity: longest common positional prefix of the
///    directory segment lists over the root file's segment count, with the
///    same degenerate-case convention as top_dir_match
///  - extension_match: case-insensitive extension equality
///  - exact_file_match: base filename equality
PairLevelScores score_file_pair(const RepoPath& f_r, const RepoPath& f_s);

/// Argmax of total() over the candidates; ties break on the
/// lexicographically smallest candidate path. Throws
/// Error{EmptyCandidateSet} when candidates is empty.
std::pair<RepoPath, PairLevelScores> best_match(const RepoPath& f_r,
                                                const std::vector<RepoPath>& candidates);

struct IssuePairScore {
    double component = 0.0;
    double top_dir = 0.0;
    double directory = 0.0;
    double extension = 0.0;
    double exact_file = 0.0;  // mean of the best matches' file indicators
    int file_match = 0;       // 1 iff any pair of files shares a filename
    size_t file_pairs = 0;    // |R_files| x |S_files|
};

/// Per-level best-match averages over the root issue's files plus the
/// any-pair file_match indicator. Empty S_files yields all zeros.
IssuePairScore score_issue_pair(const std::vector<RepoPath>& r_files,
                                const std::vector<RepoPath>& s_files);

enum class SimilarityLevel { Component, TopDir, Directory, Extension, File };

struct SimilarityReport {
    std::map<std::string, double> per_level_rates;  // component/top_dir/directory/extension/file
    std::map<std::string, std::map<std::string, double>> per_issue_scores;
    size_t issue_pair_count = 0;
    size_t file_pair_count = 0;
};

/// Averages pair scores per root issue, then averages root issues into the
/// corpus-level rates. The FILE level aggregates the binary file_match
/// indicator.
SimilarityReport aggregate_report(
    const std::vector<std::pair<std::string, std::vector<IssuePairScore>>>& pairs);

std::string similarity_report_to_json(const SimilarityReport& report);
void save_similarity_report(const SimilarityReport& report, const std::string& path);

}  // namespace multicolor
