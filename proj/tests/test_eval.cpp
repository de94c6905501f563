#include <random>

#include "doctest.h"
#include "multicolor/errors.hpp"
#include "multicolor/eval.hpp"

using namespace multicolor;

namespace {

EvalRecord make_record(const std::string& id, std::vector<std::string> truth,
                       std::vector<std::string> predicted) {
    EvalRecord record;
    record.issue_id = id;
    for (const auto& raw : truth) record.ground_truth.push_back(parse_repo_path(raw));
    for (const auto& raw : predicted) record.predicted.push_back(parse_repo_path(raw));
    return record;
}

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

}  // namespace

TEST_CASE("acc_at_k on perfect and null predictors") {
    std::vector<EvalRecord> perfect = {
        make_record("a", {"r/x.cpp"}, {"r/x.cpp", "r/y.cpp"}),
        make_record("b", {"r/z.qml"}, {"r/z.qml"}),
    };
    for (int k = 1; k <= 5; ++k) CHECK(acc_at_k(perfect, k) == doctest::Approx(1.0));

    std::vector<EvalRecord> null_pred = {
        make_record("a", {"r/x.cpp"}, {"r/q.cpp"}),
        make_record("b", {"r/z.qml"}, {}),
    };
    CHECK(acc_at_k(null_pred, 5) == doctest::Approx(0.0));
}

TEST_CASE("acc_at_k hand-counted mixed fixture") {
    // 10 records; hits at k=5: records 0,1,2,5,9 -> 0.5; at k=1: records 0,5 -> 0.2
    std::vector<EvalRecord> records;
    records.push_back(make_record("r0", {"c/a.cpp"}, {"c/a.cpp"}));                       // hit@1
    records.push_back(make_record("r1", {"c/b.cpp"}, {"c/x.cpp", "c/b.cpp"}));           // hit@2
    records.push_back(make_record("r2", {"c/c.cpp"}, {"c/1.cpp", "c/2.cpp", "c/c.cpp"}));// hit@3
    records.push_back(make_record("r3", {"c/d.cpp"}, {"c/x.cpp"}));                      // miss
    records.push_back(make_record("r4", {"c/e.cpp"}, {}));                               // miss
    records.push_back(make_record("r5", {"c/f.cpp", "c/g.cpp"}, {"c/g.cpp"}));           // hit@1
    records.push_back(make_record("r6", {"c/h.cpp"}, {"c/hh.cpp"}));                     // miss
    records.push_back(make_record("r7", {"c/i.cpp"}, {"d/i.cpp"}));                      // full-path miss
    records.push_back(make_record("r8", {"c/j.cpp"}, {"c/J.cpp"}));                      // case miss
    records.push_back(
        make_record("r9", {"c/k.cpp"}, {"c/1.cpp", "c/2.cpp", "c/3.cpp", "c/4.cpp", "c/k.cpp"}));
    CHECK(acc_at_k(records, 1) == doctest::Approx(0.2));
    CHECK(acc_at_k(records, 5) == doctest::Approx(0.5));
}

TEST_CASE("acc_at_k is monotone in k and saturates") {
    std::mt19937 rng(77);
    const std::vector<std::string> pool = {"c/a.cpp", "c/b.cpp", "c/c.cpp", "d/a.cpp", "d/b.qml"};
    for (int round = 0; round < 50; ++round) {
        std::vector<EvalRecord> records;
        const int n = 1 + static_cast<int>(rng() % 8);
        size_t max_len = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> truth = {pool[rng() % pool.size()]};
            std::vector<std::string> predicted;
            const int len = static_cast<int>(rng() % 5);
            for (int p = 0; p < len; ++p) predicted.push_back(pool[rng() % pool.size()]);
            max_len = std::max(max_len, predicted.size());
            records.push_back(make_record("r" + std::to_string(i), truth, predicted));
        }
        double prev = 0.0;
        for (int k = 1; k <= 6; ++k) {
            const double acc = acc_at_k(records, k);
            CHECK(acc >= prev);
            prev = acc;
        }
        const int saturation_k = static_cast<int>(std::max<size_t>(max_len, 1));
        CHECK(acc_at_k(records, saturation_k) == doctest::Approx(acc_at_k(records, 100)));
    }
}

TEST_CASE("acc_at_k rejects an empty corpus") {
    try {
        acc_at_k({}, 5);
        FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
}

TEST_CASE("sic_match_rate counts filename-level matches") {
    IssueStore corpus;
    Issue h1 = make_issue("H1", "t", "d", {"ui/src/a.qml"});
    Issue h2 = make_issue("H2", "t", "d", {"core/z.cpp"});
    corpus.emplace("H1", h1);
    corpus.emplace("H2", h2);

    // same filename in a different directory still matches (file level)
    Issue q1 = make_issue("Q1", "t", "d", {"ui/other/a.qml"});
    // disjoint filenames do not
    Issue q2 = make_issue("Q2", "t", "d", {"ui/src/b.qml"});
    std::map<std::string, std::vector<std::string>> retrieved = {
        {"Q1", {"H1"}},
        {"Q2", {"H2"}},
    };
    CHECK(sic_match_rate({q1, q2}, retrieved, corpus) == doctest::Approx(0.5));

    try {
        sic_match_rate({}, retrieved, corpus);
        FAIL("expected EmptyCorpus");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
}

TEST_CASE("classify_richness responds to fields and verbosity") {
    Issue sparse = make_issue("s", "short", "only three tokens");
    auto sparse_label = classify_richness(sparse, 0.5, 50);
    CHECK(sparse_label.label == Richness::Sparse);

    Issue rich = make_issue("r", "verbose", "");
    for (int i = 0; i < 60; ++i) rich.description += "word ";
    rich.root_cause = "cause";
    rich.feature_summary = "summary";
    rich.priority = 1;
    rich.severity = 2;
    rich.root_cause_category = "cat";
    rich.product_family = "fam";
    rich.product_name = "name";
    auto rich_label = classify_richness(rich, 0.5, 50);
    CHECK(rich_label.label == Richness::Rich);
    CHECK(rich_label.completeness_score == doctest::Approx(1.0));

    // boundary: completeness 0 + verbosity 1 -> score 0.5 flips exactly at 0.5
    Issue boundary = make_issue("b", "t", "");
    for (int i = 0; i < 50; ++i) boundary.description += "w ";
    auto at = classify_richness(boundary, 0.5, 50);
    CHECK(at.completeness_score == doctest::Approx(0.5));
    CHECK(at.label == Richness::Rich);
    auto above = classify_richness(boundary, 0.51, 50);
    CHECK(above.label == Richness::Sparse);
}

TEST_CASE("code_term_histogram buckets partition the corpus") {
    std::vector<Issue> issues = {
        make_issue("a", "plain words only", "no identifiers at all"),            // 0
        make_issue("b", "fix parse_header now", "plain text"),                   // 1
        make_issue("c", "NullPointer in parse_header", "also RenderLoop there"), // 3
        make_issue("d", "a_b c_d e_f g_h i_j k_l", "more plain"),                // 6
    };
    auto hist = code_term_histogram(issues);
    CHECK(hist.zero == 1);
    CHECK(hist.one == 1);
    CHECK(hist.two_to_five == 1);
    CHECK(hist.more_than_five == 1);
    CHECK(hist.total() == issues.size());

    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        std::vector<Issue> corpus;
        const int n = static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) {
            corpus.push_back(make_issue("i" + std::to_string(i),
                                        (rng() % 2) ? "someCamel here" : "plain title",
                                        (rng() % 2) ? "snake_case body" : "plain body"));
        }
        CHECK(code_term_histogram(corpus).total() == corpus.size());
    }
}

TEST_CASE("degenerate corpus lands entirely in bucket zero") {
    std::vector<Issue> issues;
    for (int i = 0; i < 7; ++i) {
        issues.push_back(make_issue("i" + std::to_string(i), "plain words", "more plain words"));
    }
    auto hist = code_term_histogram(issues);
    CHECK(hist.zero == issues.size());
    CHECK(hist.total() == issues.size());
}
