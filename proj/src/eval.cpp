#include "multicolor/eval.hpp"

#include <algorithm>

#include "multicolor/errors.hpp"
#include "multicolor/tokenize.hpp"

namespace multicolor {

double acc_at_k(const std::vector<EvalRecord>& records, int k) {
    if (records.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no evaluation records");
    }
    size_t hits = 0;
    for (const auto& record : records) {
        const size_t limit = std::min<size_t>(record.predicted.size(), static_cast<size_t>(k));
        bool hit = false;
        for (size_t i = 0; i < limit && !hit; ++i) {
            for (const auto& truth : record.ground_truth) {
                if (record.predicted[i] == truth) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) ++hits;
    }
    return static_cast<double>(hits) / records.size();
}

double sic_match_rate(const std::vector<Issue>& query_issues,
                      const std::map<std::string, std::vector<std::string>>& retrieved_map,
                      const IssueStore& corpus) {
    if (query_issues.empty()) {
        throw Error(ErrorCode::EmptyCorpus, "no query issues");
    }
    size_t matched = 0;
    for (const auto& query : query_issues) {
        auto it = retrieved_map.find(query.id);
        if (it == retrieved_map.end()) continue;
        bool hit = false;
        for (const auto& similar_id : it->second) {
            auto similar = corpus.find(similar_id);
            if (similar == corpus.end()) {
                throw Error(ErrorCode::UnknownIssue,
                            "retrieved issue '" + similar_id + "' not in corpus");
            }
            for (const auto& f_s : similar->second.changed_files) {
                for (const auto& f_r : query.changed_files) {
                    if (f_r.filename == f_s.filename) {
                        hit = true;
                        break;
                    }
                }
                if (hit) break;
            }
            if (hit) break;
        }
        if (hit) ++matched;
    }
    return static_cast<double>(matched) / query_issues.size();
}

RichnessLabel classify_richness(const Issue& issue, double threshold, int verbosity_scale) {
    int populated = 0;
    const int total_optional = 7;
    if (issue.root_cause) ++populated;
    if (issue.feature_summary) ++populated;
    if (issue.priority) ++populated;
    if (issue.severity) ++populated;
    if (issue.root_cause_category) ++populated;
    if (issue.product_family) ++populated;
    if (issue.product_name) ++populated;

    size_t tokens = 0;
    bool in_token = false;
    for (char c : issue.description) {
        const bool space = std::isspace(static_cast<unsigned char>(c));
        if (!space && !in_token) ++tokens;
        in_token = !space;
    }
    const double completeness = static_cast<double>(populated) / total_optional;
    const double verbosity =
        std::min(1.0, static_cast<double>(tokens) / std::max(1, verbosity_scale));

    RichnessLabel label;
    label.completeness_score = (completeness + verbosity) / 2.0;
    label.label = label.completeness_score >= threshold ? Richness::Rich : Richness::Sparse;
    return label;
}

CodeTermHistogram code_term_histogram(const std::vector<Issue>& issues) {
    CodeTermHistogram hist;
    for (const auto& issue : issues) {
        const int count = count_code_terms(issue.title + " " + issue.description);
        if (count == 0) ++hist.zero;
        else if (count == 1) ++hist.one;
        else if (count <= 5) ++hist.two_to_five;
        else ++hist.more_than_five;
    }
    return hist;
}

}  // namespace multicolor
