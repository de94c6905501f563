#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multicolor/bm25.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/sic.hpp"

namespace multicolor {

/// Ordered log of localization-tool invocations; its length is the
/// # Tool Calls metric. Entries carry a logical sequence number so runs
/// stay byte-reproducible.
struct ToolLedger {
    struct Entry {
        std::string tool;
        uint64_t args_digest = 0;
        uint64_t seq = 0;
    };
    std::vector<Entry> entries;
    std::map<std::string, uint64_t> per_tool;

    void record(const std::string& tool, const std::string& args);
    size_t calls() const { return entries.size(); }
};

enum class Variant { CodeSearch, SicPlusCodeSearch, GraphOnly, Full };

const char* to_string(Variant v);
std::optional<Variant> variant_from_string(std::string_view s);
std::vector<Variant> all_variants();

struct RankedFile {
    std::string path;
    double score = 0.0;
    std::set<std::string> provenance;  // SIC_FILE, SIC_DIR, BM25, GRAPH_EXPAND
};

struct LocalizationResult {
    std::string issue_id;
    Variant variant = Variant::Full;
    std::vector<RankedFile> ranked_files;
    size_t tool_calls = 0;
    std::vector<std::string> scope_used;
};

struct LocalizeConfig {
    int k = 5;            // similar issues to retrieve
    int max_results = 5;  // files returned
    double w_sic = 0.5;
    double w_bm25 = 0.4;
    double w_graph = 0.1;
    int expand_top = 3;  // BM25 candidates fed to graph expansion
};

/// Deterministic localization policy over the prebuilt artifacts. The
/// cue-driven stages degrade gracefully: empty cues widen the scope to the
/// whole repository. Throws Error{IndexMismatch} when the BM25 index was
/// built from a different repository snapshot than the graph.
class Localizer {
public:
    Localizer(const DependencyGraph& graph, const Bm25Index& bm25, const IssueIndex* sic,
              const IssueStore* corpus, const Embedder* embedder, const Summarizer* summarizer,
              LocalizeConfig config);

    LocalizationResult run(const Issue& issue, Variant variant) const;
    std::map<Variant, LocalizationResult> run_all(const Issue& issue) const;

private:
    const DependencyGraph& graph_;
    const Bm25Index& bm25_;
    const IssueIndex* sic_;
    const IssueStore* corpus_;
    const Embedder* embedder_;
    const Summarizer* summarizer_;
    LocalizeConfig config_;
};

/// The full four-stage policy: retrieve similar issues, prune scope, run
/// scoped code search, expand one hop through the graph, fuse scores.
LocalizationResult localize(const Issue& issue, const DependencyGraph& graph,
                            const Bm25Index& bm25, const IssueIndex& sic,
                            const IssueStore& corpus, const Embedder& embedder,
                            const Summarizer& summarizer, const LocalizeConfig& config = {});

/// Lexical baseline: whole-repository code search only.
LocalizationResult localize_baseline(const Issue& issue, const DependencyGraph& graph,
                                     const Bm25Index& bm25, const LocalizeConfig& config = {});

/// Runs every ablation arm with a shared configuration.
std::map<Variant, LocalizationResult> ablation_variants(
    const Issue& issue, const DependencyGraph& graph, const Bm25Index& bm25,
    const IssueIndex& sic, const IssueStore& corpus, const Embedder& embedder,
    const Summarizer& summarizer, const LocalizeConfig& config = {});

std::string localization_result_to_json(const LocalizationResult& result);
LocalizationResult localization_result_from_json(const std::string& text);

}  // namespace multicolor
