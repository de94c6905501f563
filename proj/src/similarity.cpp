#include "multicolor/similarity.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "multicolor/errors.hpp"

namespace multicolor {

using nlohmann::json;

PairLevelScores score_file_pair(const RepoPath& f_r, const RepoPath& f_s) {
    PairLevelScores s;
    s.component_match = (f_r.component == f_s.component) ? 1 : 0;

    const auto& r_segs = f_r.segments;
    const auto& s_segs = f_s.segments;
    if (r_segs.empty()) {
        // Degenerate root-at-top case: award the hierarchy terms only when
        // the other path is also at its component root and components agree.
        const bool both_at_root = s_segs.empty() && s.component_match == 1;
        s.top_dir_match = both_at_root ? 1 : 0;
        s.directory_similarity = both_at_root ? 1.0 : 0.0;
    } else {
        s.top_dir_match = (!s_segs.empty() && r_segs.front() == s_segs.front()) ? 1 : 0;
        size_t shared = 0;
        while (shared < r_segs.size() && shared < s_segs.size() &&
               r_segs[shared] == s_segs[shared]) {
            ++shared;
        }
        s.directory_similarity = static_cast<double>(shared) / r_segs.size();
    }

    s.extension_match = (ascii_lower(f_r.extension()) == ascii_lower(f_s.extension())) ? 1 : 0;
    s.exact_file_match = (f_r.filename == f_s.filename) ? 1 : 0;
    return s;
}

std::pair<RepoPath, PairLevelScores> best_match(const RepoPath& f_r,
                                                const std::vector<RepoPath>& candidates) {
    if (candidates.empty()) {
        throw Error(ErrorCode::EmptyCandidateSet, "best_match needs at least one candidate");
    }
    const RepoPath* best = nullptr;
    PairLevelScores best_scores;
    std::string best_key;
    for (const auto& candidate : candidates) {
        PairLevelScores scores = score_file_pair(f_r, candidate);
        const std::string key = candidate.str();
        if (!best || scores.total() > best_scores.total() ||
            (scores.total() == best_scores.total() && key < best_key)) {
            best = &candidate;
            best_scores = scores;
            best_key = key;
        }
    }
    return {*best, best_scores};
}

IssuePairScore score_issue_pair(const std::vector<RepoPath>& r_files,
                                const std::vector<RepoPath>& s_files) {
    IssuePairScore out;
    out.file_pairs = r_files.size() * s_files.size();
    if (s_files.empty()) return out;

    for (const auto& f_r : r_files) {
        auto [_, scores] = best_match(f_r, s_files);
        out.component += scores.component_match;
        out.top_dir += scores.top_dir_match;
        out.directory += scores.directory_similarity;
        out.extension += scores.extension_match;
        out.exact_file += scores.exact_file_match;
        for (const auto& f_s : s_files) {
            if (f_r.filename == f_s.filename) out.file_match = 1;
        }
    }
    const double n = static_cast<double>(r_files.size());
    out.component /= n;
    out.top_dir /= n;
    out.directory /= n;
    out.extension /= n;
    out.exact_file /= n;
    return out;
}

SimilarityReport aggregate_report(
    const std::vector<std::pair<std::string, std::vector<IssuePairScore>>>& pairs) {
    SimilarityReport report;
    double component = 0, top_dir = 0, directory = 0, extension = 0, file = 0;
    size_t issue_count = 0;

    for (const auto& [issue_id, pair_scores] : pairs) {
        if (pair_scores.empty()) continue;
        double c = 0, t = 0, d = 0, e = 0, f = 0;
        for (const auto& score : pair_scores) {
            c += score.component;
            t += score.top_dir;
            d += score.directory;
            e += score.extension;
            f += score.file_match;
            report.issue_pair_count += 1;
            report.file_pair_count += score.file_pairs;
        }
        const double n = static_cast<double>(pair_scores.size());
        c /= n;
        t /= n;
        d /= n;
        e /= n;
        f /= n;
        report.per_issue_scores[issue_id] = {{"component", c},
                                             {"top_dir", t},
                                             {"directory", d},
                                             {"extension", e},
                                             {"file", f}};
        component += c;
        top_dir += t;
        directory += d;
        extension += e;
        file += f;
        ++issue_count;
    }
    const double n = issue_count ? static_cast<double>(issue_count) : 1.0;
    report.per_level_rates = {{"component", component / n},
                              {"top_dir", top_dir / n},
                              {"directory", directory / n},
                              {"extension", extension / n},
                              {"file", file / n}};
    return report;
}

std::string similarity_report_to_json(const SimilarityReport& report) {
    json doc;
    doc["per_level_rates"] = report.per_level_rates;
    doc["per_issue"] = report.per_issue_scores;
    doc["issue_pair_count"] = report.issue_pair_count;
    doc["file_pair_count"] = report.file_pair_count;
    return doc.dump(2) + "\n";
}

void save_similarity_report(const SimilarityReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << similarity_report_to_json(report);
}

}  // namespace multicolor
