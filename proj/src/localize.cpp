#include "multicolor/localize.hpp"

#include <algorithm>

#include "json.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/tokenize.hpp"

namespace multicolor {

using nlohmann::json;

namespace {

uint64_t fnv1a(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string dirname_of(const std::string& path) {
    auto pos = path.rfind('/');
    return pos == std::string::npos ? std::string() : path.substr(0, pos);
}

}  // namespace

void ToolLedger::record(const std::string& tool, const std::string& args) {
    entries.push_back({tool, fnv1a(args), static_cast<uint64_t>(entries.size())});
    per_tool[tool] += 1;
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::CodeSearch: return "code-search";
        case Variant::SicPlusCodeSearch: return "sic-code-search";
        case Variant::GraphOnly: return "graph-only";
        case Variant::Full: return "full";
    }
    return "full";
}

std::optional<Variant> variant_from_string(std::string_view s) {
    if (s == "code-search") return Variant::CodeSearch;
    if (s == "sic-code-search") return Variant::SicPlusCodeSearch;
    if (s == "graph-only") return Variant::GraphOnly;
    if (s == "full") return Variant::Full;
    return std::nullopt;
}

std::vector<Variant> all_variants() {
    return {Variant::CodeSearch, Variant::SicPlusCodeSearch, Variant::GraphOnly, Variant::Full};
}

Localizer::Localizer(const DependencyGraph& graph, const Bm25Index& bm25, const IssueIndex* sic,
                     const IssueStore* corpus, const Embedder* embedder,
                     const Summarizer* summarizer, LocalizeConfig config)
    : graph_(graph),
      bm25_(bm25),
      sic_(sic),
      corpus_(corpus),
      embedder_(embedder),
      summarizer_(summarizer),
      config_(config) {
    if (!bm25_.graph_snapshot.empty() && !graph_.snapshot.empty() &&
        bm25_.graph_snapshot != graph_.snapshot) {
        throw Error(ErrorCode::IndexMismatch,
                    "code index snapshot " + bm25_.graph_snapshot +
                        " does not match graph snapshot " + graph_.snapshot);
    }
}

LocalizationResult Localizer::run(const Issue& issue, Variant variant) const {
    const bool use_sic = (variant == Variant::Full || variant == Variant::SicPlusCodeSearch) &&
                         sic_ && corpus_ && embedder_ && summarizer_;
    const bool use_graph = variant == Variant::Full || variant == Variant::GraphOnly;

    ToolLedger ledger;
    LocalizationResult result;
    result.issue_id = issue.id;
    result.variant = variant;

    // (1) similar-issue retrieval
    SicCue cue;
    if (use_sic) {
        ledger.record("sic_retrieve", issue.id);
        auto retrieved = retrieve_similar(*sic_, issue, config_.k, *embedder_, *summarizer_);
        cue = extract_cues(retrieved, *corpus_);
    }

    // (2) scope pruning: most specific cue directories, then components
    std::vector<std::string> scope;
    if (use_sic) {
        std::set<std::string> dirs;
        for (const auto& [file, _] : cue.candidate_files) {
            const std::string dir = dirname_of(file);
            if (!dir.empty()) dirs.insert(dir);
        }
        if (!dirs.empty()) {
            scope.assign(dirs.begin(), dirs.end());
        } else {
            for (const auto& [component, _] : cue.candidate_components) scope.push_back(component);
        }
    }
    result.scope_used = scope;

    // (3) scoped code search mapped to files
    const auto query = tokenize_identifiers(issue.title + " " + issue.description);
    std::string query_digest;
    for (const auto& token : query) {
        query_digest += token;
        query_digest += ' ';
    }
    ledger.record("bm25_query", query_digest);
    const auto file_hits = rank_files(bm25_, query, static_cast<int>(bm25_.units.size()) + 1,
                                      scope.empty() ? nullptr : &scope);

    // (4) one-hop graph expansion from the top code-search candidates
    std::set<std::string> neighbors;
    if (use_graph) {
        const int expand = std::min<int>(config_.expand_top, static_cast<int>(file_hits.size()));
        for (int i = 0; i < expand; ++i) {
            const std::string& start = file_hits[i].first;
            if (!graph_.has_node(start)) continue;
            ledger.record("graph_traverse", start);
            auto sub = traverse(graph_, start,
                                {RelationKind::Imports, RelationKind::Contains}, Direction::Both, 1);
            for (const auto& [id, depth] : sub.depth) {
                if (depth == 0) continue;
                auto it = graph_.nodes.find(id);
                if (it != graph_.nodes.end() && it->second.kind == EntityKind::File) {
                    neighbors.insert(id);
                }
            }
        }
    }

    // (5) score fusion over the candidate pool
    std::map<std::string, double> bm25_score;
    for (const auto& [file, score] : file_hits) bm25_score[file] = score;
    double bm25_min = 0.0, bm25_max = 0.0;
    if (!file_hits.empty()) {
        bm25_max = file_hits.front().second;
        bm25_min = file_hits.back().second;
    }

    int cue_max = 0;
    for (const auto& [_, count] : cue.candidate_files) cue_max = std::max(cue_max, count);

    std::set<std::string> candidates;
    for (const auto& [file, _] : bm25_score) candidates.insert(file);
    for (const auto& file : neighbors) candidates.insert(file);
    if (use_sic) {
        for (const auto& [file, _] : cue.candidate_files) {
            if (graph_.has_node(file)) candidates.insert(file);
        }
    }

    std::vector<RankedFile> ranked;
    for (const auto& file : candidates) {
        RankedFile entry;
        entry.path = file;
        double score = 0.0;
        if (use_sic) {
            auto it = cue.candidate_files.find(file);
            if (it != cue.candidate_files.end() && cue_max > 0) {
                score += config_.w_sic * (static_cast<double>(it->second) / cue_max);
                entry.provenance.insert("SIC_FILE");
            }
            for (const auto& prefix : scope) {
                if (path_has_prefix(file, prefix)) {
                    entry.provenance.insert("SIC_DIR");
                    break;
                }
            }
        }
        if (auto it = bm25_score.find(file); it != bm25_score.end()) {
            const double normalized =
                (bm25_max > bm25_min) ? (it->second - bm25_min) / (bm25_max - bm25_min) : 1.0;
            score += config_.w_bm25 * normalized;
            entry.provenance.insert("BM25");
        }
        if (neighbors.count(file)) {
            score += config_.w_graph;
            entry.provenance.insert("GRAPH_EXPAND");
        }
        entry.score = score;
        if (!entry.provenance.empty()) ranked.push_back(std::move(entry));
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedFile& a, const RankedFile& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.path < b.path;
    });
    if (ranked.size() > static_cast<size_t>(config_.max_results)) {
        ranked.resize(config_.max_results);
    }
    result.ranked_files = std::move(ranked);
    result.tool_calls = ledger.calls();
    return result;
}

std::map<Variant, LocalizationResult> Localizer::run_all(const Issue& issue) const {
    std::map<Variant, LocalizationResult> out;
    for (Variant v : all_variants()) out.emplace(v, run(issue, v));
    return out;
}

LocalizationResult localize(const Issue& issue, const DependencyGraph& graph,
                            const Bm25Index& bm25, const IssueIndex& sic,
                            const IssueStore& corpus, const Embedder& embedder,
                            const Summarizer& summarizer, const LocalizeConfig& config) {
    Localizer localizer(graph, bm25, &sic, &corpus, &embedder, &summarizer, config);
    return localizer.run(issue, Variant::Full);
}

LocalizationResult localize_baseline(const Issue& issue, const DependencyGraph& graph,
                                     const Bm25Index& bm25, const LocalizeConfig& config) {
    Localizer localizer(graph, bm25, nullptr, nullptr, nullptr, nullptr, config);
    return localizer.run(issue, Variant::CodeSearch);
}

std::map<Variant, LocalizationResult> ablation_variants(
    const Issue& issue, const DependencyGraph& graph, const Bm25Index& bm25,
    const IssueIndex& sic, const IssueStore& corpus, const Embedder& embedder,
    const Summarizer& summarizer, const LocalizeConfig& config) {
    Localizer localizer(graph, bm25, &sic, &corpus, &embedder, &summarizer, config);
    return localizer.run_all(issue);
}

std::string localization_result_to_json(const LocalizationResult& result) {
    json doc;
    doc["issue_id"] = result.issue_id;
    doc["variant"] = to_string(result.variant);
    auto files = json::array();
    for (const auto& entry : result.ranked_files) {
        json f;
        f["path"] = entry.path;
        f["score"] = entry.score;
        f["provenance"] = entry.provenance;
        files.push_back(std::move(f));
    }
    doc["ranked_files"] = std::move(files);
    doc["tool_calls"] = result.tool_calls;
    doc["scope_used"] = result.scope_used;
    return doc.dump();
}

LocalizationResult localization_result_from_json(const std::string& text) {
    json doc = json::parse(text);
    LocalizationResult result;
    result.issue_id = doc.at("issue_id").get<std::string>();
    auto variant = variant_from_string(doc.at("variant").get<std::string>());
    if (!variant) throw Error(ErrorCode::BadConfig, "unknown variant in results file");
    result.variant = *variant;
    for (const auto& f : doc.at("ranked_files")) {
        RankedFile entry;
        entry.path = f.at("path").get<std::string>();
        entry.score = f.at("score").get<double>();
        entry.provenance = f.at("provenance").get<std::set<std::string>>();
        result.ranked_files.push_back(std::move(entry));
    }
    result.tool_calls = doc.at("tool_calls").get<size_t>();
    result.scope_used = doc.at("scope_used").get<std::vector<std::string>>();
    return result;
}

}  // namespace multicolor
