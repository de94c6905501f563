#include "multicolor/sic.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "multicolor/errors.hpp"

namespace multicolor {

using nlohmann::json;

const char* to_string(SicMode mode) {
    return mode == SicMode::Embed ? "embed" : "summ";
}

std::string build_issue_text(const Issue& issue, SicMode mode, const Summarizer& summarizer) {
    if (mode == SicMode::Embed) {
        return issue.title + "\n" + issue.description;
    }
    return summarizer.summarize(issue);
}

IssueIndex index_issues(const std::vector<Issue>& issues, SicMode mode, const Embedder& embedder,
                        const Summarizer& summarizer) {
    IssueIndex idx;
    idx.mode = mode;
    idx.dimension = embedder.dimension();
    idx.embedder_fingerprint = embedder.fingerprint();

    std::set<std::string> seen;
    for (const auto& issue : issues) {
        if (!seen.insert(issue.id).second) {
            throw Error(ErrorCode::DuplicateIssueId, "issue '" + issue.id + "' indexed twice");
        }
        IssueEntry entry;
        entry.issue_id = issue.id;
        entry.vector = embedder.embed(build_issue_text(issue, mode, summarizer));
        if (static_cast<int>(entry.vector.size()) != idx.dimension) {
            throw Error(ErrorCode::DimensionMismatch,
                        "embedder returned " + std::to_string(entry.vector.size()) +
                            " dims, expected " + std::to_string(idx.dimension));
        }
        entry.program_name = issue.program_name;
        entry.triage_category = issue.triage_category;
        entry.triage_assignment = issue.triage_assignment;
        idx.entries.push_back(std::move(entry));
    }
    std::sort(idx.entries.begin(), idx.entries.end(),
              [](const IssueEntry& a, const IssueEntry& b) { return a.issue_id < b.issue_id; });
    return idx;
}

std::vector<std::pair<std::string, double>> retrieve_similar(const IssueIndex& idx,
                                                             const Issue& query, int k,
                                                             const Embedder& embedder,
                                                             const Summarizer& summarizer) {
    std::vector<std::pair<std::string, double>> scored;
    if (idx.entries.empty() || k < 1) return scored;

    const auto query_vec = embedder.embed(build_issue_text(query, idx.mode, summarizer));
    for (const auto& entry : idx.entries) {
        if (entry.issue_id == query.id) continue;
        if (entry.program_name != query.program_name) continue;
        if (entry.triage_category != query.triage_category) continue;
        if (entry.triage_assignment != query.triage_assignment) continue;
        scored.emplace_back(entry.issue_id, cosine(query_vec, entry.vector));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > static_cast<size_t>(k)) scored.resize(k);
    return scored;
}

SicCue extract_cues(const std::vector<std::pair<std::string, double>>& retrieved,
                    const IssueStore& corpus) {
    SicCue cue;
    cue.similar_issues = retrieved;
    NormalizingSummarizer summarizer;
    for (const auto& [issue_id, score] : retrieved) {
        auto it = corpus.find(issue_id);
        if (it == corpus.end()) {
            throw Error(ErrorCode::UnknownIssue, "retrieved issue '" + issue_id + "' not in corpus");
        }
        const Issue& issue = it->second;
        std::set<std::string> components, directories, files;
        for (const auto& path : issue.changed_files) {
            components.insert(path.component);
            std::string prefix = path.component;
            directories.insert(prefix);
            for (const auto& segment : path.segments) {
                prefix += "/" + segment;
                directories.insert(prefix);
            }
            files.insert(path.str());
        }
        for (const auto& c : components) cue.candidate_components[c] += 1;
        for (const auto& d : directories) cue.candidate_directories[d] += 1;
        for (const auto& f : files) cue.candidate_files[f] += 1;
        cue.summaries.push_back(summarizer.summarize(issue));
    }
    return cue;
}

std::string sic_index_to_json(const IssueIndex& idx) {
    json doc;
    doc["mode"] = to_string(idx.mode);
    doc["dimension"] = idx.dimension;
    doc["embedder_fingerprint"] = idx.embedder_fingerprint;
    auto entries = json::array();
    for (const auto& entry : idx.entries) {
        json e;
        e["issue_id"] = entry.issue_id;
        e["program_name"] = entry.program_name;
        e["triage_category"] = entry.triage_category;
        e["triage_assignment"] = entry.triage_assignment;
        e["vector"] = entry.vector;
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

IssueIndex sic_index_from_json(const std::string& text) {
    json doc = json::parse(text);
    IssueIndex idx;
    idx.mode = doc.at("mode").get<std::string>() == "summ" ? SicMode::Summ : SicMode::Embed;
    idx.dimension = doc.at("dimension").get<int>();
    idx.embedder_fingerprint = doc.at("embedder_fingerprint").get<std::string>();
    for (const auto& e : doc.at("entries")) {
        IssueEntry entry;
        entry.issue_id = e.at("issue_id").get<std::string>();
        entry.program_name = e.at("program_name").get<std::string>();
        entry.triage_category = e.at("triage_category").get<std::string>();
        entry.triage_assignment = e.at("triage_assignment").get<std::string>();
        entry.vector = e.at("vector").get<std::vector<double>>();
        idx.entries.push_back(std::move(entry));
    }
    return idx;
}

void save_sic_index(const IssueIndex& idx, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << sic_index_to_json(idx);
}

IssueIndex load_sic_index(const std::string& path, const std::string& expected_fingerprint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    IssueIndex idx = sic_index_from_json(buf.str());
    if (!expected_fingerprint.empty() && idx.embedder_fingerprint != expected_fingerprint) {
        throw Error(ErrorCode::FingerprintMismatch,
                    "index was built with '" + idx.embedder_fingerprint + "', expected '" +
                        expected_fingerprint + "'");
    }
    return idx;
}

}  // namespace multicolor
