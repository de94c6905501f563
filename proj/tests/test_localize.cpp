#include "doctest.h"
#include "multicolor/errors.hpp"
#include "multicolor/localize.hpp"

using namespace multicolor;

namespace {

struct TestBed {
    DependencyGraph graph;
    Bm25Index bm25;
    IssueIndex sic;
    IssueStore corpus;
    HashedEmbedder embedder;
    NormalizingSummarizer summarizer;

    Localizer make(LocalizeConfig config = {}) const {
        return Localizer(graph, bm25, &sic, &corpus, &embedder, &summarizer, config);
    }
};

Issue make_issue(const std::string& id, const std::string& title, const std::string& description,
                 std::vector<std::string> changed = {}) {
    Issue issue;
    issue.id = id;
    issue.title = title;
    issue.description = description;
    issue.program_name = "prog";
    issue.triage_category = "UI";
    issue.triage_assignment = "team";
    for (const auto& raw : changed) issue.changed_files.push_back(parse_repo_path(raw));
    return issue;
}

TestBed make_bed() {
    TestBed bed;
    std::map<std::string, std::string> files = {
        {"repo/ui/alpha.qml", "Item {\n    id: alphaWidget\n    function blink() { }\n}\n"},
        {"repo/ui/beta.qml", "Item {\n    id: betaWidget\n}\n"},
        {"repo/core/engine.cpp", "void engine_start() { spindle(); }\n"},
        {"repo/core/spindle.cpp", "void spindle() { }\n"},
    };
    bed.graph = build_graph_from_memory("repo", files, GraphMode::Mixed);
    bed.bm25 = build_bm25(collect_indexable_units(
        bed.graph,
        [&](const std::string& path) -> std::optional<std::string> {
            auto it = files.find(path);
            if (it == files.end()) return std::nullopt;
            return it->second;
        }));
    bed.bm25.graph_snapshot = bed.graph.snapshot;

    std::vector<Issue> history = {
        make_issue("H1", "alphaWidget blink broken", "The alphaWidget blink never fires.",
                   {"repo/ui/alpha.qml"}),
        make_issue("H2", "different story", "Totally unrelated words live here.",
                   {"repo/core/spindle.cpp"}),
    };
    bed.corpus = make_issue_store(history);
    bed.sic = index_issues(history, SicMode::Embed, bed.embedder, bed.summarizer);
    return bed;
}

}  // namespace

TEST_CASE("planted duplicate surfaces its fix file with SIC provenance") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto result = bed.make().run(query, Variant::Full);
    REQUIRE_FALSE(result.ranked_files.empty());
    bool found = false;
    for (const auto& entry : result.ranked_files) {
        if (entry.path == "repo/ui/alpha.qml") {
            found = true;
            CHECK(entry.provenance.count("SIC_FILE"));
        }
    }
    CHECK(found);
    // both history issues pass the filters, so both cue directories scope in
    CHECK(result.scope_used == std::vector<std::string>{"repo/core", "repo/ui"});
}

TEST_CASE("unique token wins over the whole repo when no history matches") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "crash in spindle", "spindle faults on startup");
    query.program_name = "no-such-program";  // filters exhaust the index
    auto result = bed.make().run(query, Variant::Full);
    REQUIRE_FALSE(result.ranked_files.empty());
    CHECK(result.ranked_files[0].path == "repo/core/spindle.cpp");
    CHECK(result.scope_used.empty());
}

TEST_CASE("empty graph still answers with an empty ranking") {
    DependencyGraph graph = build_graph_from_memory("empty", {}, GraphMode::Mixed);
    Bm25Index bm25;  // no units
    Localizer localizer(graph, bm25, nullptr, nullptr, nullptr, nullptr, {});
    auto result = localizer.run(make_issue("Q", "anything", "at all"), Variant::Full);
    CHECK(result.ranked_files.empty());
    CHECK(result.tool_calls >= 1);
}

TEST_CASE("baseline never invokes similar-issue retrieval") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto baseline = localize_baseline(query, bed.graph, bed.bm25, {});
    CHECK(baseline.scope_used.empty());
    for (const auto& entry : baseline.ranked_files) {
        CHECK_FALSE(entry.provenance.count("SIC_FILE"));
        CHECK_FALSE(entry.provenance.count("SIC_DIR"));
        CHECK_FALSE(entry.provenance.count("GRAPH_EXPAND"));
    }
    // same lexical path as the full pipeline's code-search stage
    auto same = bed.make().run(query, Variant::CodeSearch);
    REQUIRE(baseline.ranked_files.size() == same.ranked_files.size());
    for (size_t i = 0; i < baseline.ranked_files.size(); ++i) {
        CHECK(baseline.ranked_files[i].path == same.ranked_files[i].path);
    }
}

TEST_CASE("ablation variants share config and stay within max_results") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto variants = bed.make().run_all(query);
    CHECK(variants.size() == 4);
    for (const auto& [variant, result] : variants) {
        CHECK(result.ranked_files.size() <= 5);
        for (size_t i = 1; i < result.ranked_files.size(); ++i) {
            CHECK(result.ranked_files[i - 1].score >= result.ranked_files[i].score);
        }
        for (const auto& entry : result.ranked_files) {
            CHECK_FALSE(entry.provenance.empty());
        }
    }
    // graph-only must not carry SIC provenance
    for (const auto& entry : variants.at(Variant::GraphOnly).ranked_files) {
        CHECK_FALSE(entry.provenance.count("SIC_FILE"));
    }
}

TEST_CASE("scope soundness: BM25-tagged files stay inside the scope") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto result = bed.make().run(query, Variant::Full);
    REQUIRE_FALSE(result.scope_used.empty());
    for (const auto& entry : result.ranked_files) {
        if (entry.provenance.count("BM25")) {
            bool inside = false;
            for (const auto& prefix : result.scope_used) {
                if (path_has_prefix(entry.path, prefix)) inside = true;
            }
            CHECK(inside);
        }
    }
}

TEST_CASE("cue hit never ranks worse than the lexical baseline") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto full = bed.make().run(query, Variant::Full);
    auto baseline = localize_baseline(query, bed.graph, bed.bm25, {});
    auto rank_of = [](const LocalizationResult& result, const std::string& path) {
        for (size_t i = 0; i < result.ranked_files.size(); ++i) {
            if (result.ranked_files[i].path == path) return static_cast<int>(i);
        }
        return static_cast<int>(result.ranked_files.size());
    };
    CHECK(rank_of(full, "repo/ui/alpha.qml") <= rank_of(baseline, "repo/ui/alpha.qml"));
}

TEST_CASE("results are deterministic byte for byte") {
    TestBed bed = make_bed();
    Issue query = make_issue("Q", "alphaWidget blink broken", "The alphaWidget blink never fires.");
    auto localizer = bed.make();
    const std::string first = localization_result_to_json(localizer.run(query, Variant::Full));
    for (int i = 0; i < 5; ++i) {
        CHECK(localization_result_to_json(localizer.run(query, Variant::Full)) == first);
    }
    // round-trip
    auto back = localization_result_from_json(first);
    CHECK(localization_result_to_json(back) == first);
}

TEST_CASE("index mismatch is rejected") {
    TestBed bed = make_bed();
    Bm25Index stale = bed.bm25;
    stale.graph_snapshot = "0000000000000000";
    try {
        Localizer localizer(bed.graph, stale, &bed.sic, &bed.corpus, &bed.embedder,
                            &bed.summarizer, {});
        FAIL("expected IndexMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IndexMismatch);
    }
}

TEST_CASE("tool ledger counts agree across three tallies") {
    ToolLedger ledger;
    ledger.record("sic_retrieve", "a");
    ledger.record("bm25_query", "b");
    ledger.record("graph_traverse", "c");
    ledger.record("graph_traverse", "d");
    CHECK(ledger.calls() == 4);
    CHECK(ledger.entries.size() == 4);
    uint64_t per_tool_sum = 0;
    for (const auto& [tool, count] : ledger.per_tool) per_tool_sum += count;
    CHECK(per_tool_sum == 4);
    for (size_t i = 0; i < ledger.entries.size(); ++i) {
        CHECK(ledger.entries[i].seq == i);
    }
}
