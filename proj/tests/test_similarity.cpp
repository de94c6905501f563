#include <random>

#include "doctest.h"
#include "multicolor/errors.hpp"
#include "multicolor/similarity.hpp"
#include "oracles.hpp"

using namespace multicolor;

namespace {

RepoPath rp(const std::string& raw) { return parse_repo_path(raw); }

std::vector<RepoPath> rps(const std::vector<std::string>& raws) {
    std::vector<RepoPath> out;
    for (const auto& raw : raws) out.push_back(rp(raw));
    return out;
}

}  // namespace

TEST_CASE("identical paths score 5.0 across all levels") {
    auto s = score_file_pair(rp("ui/src/widgets/b.qml"), rp("ui/src/widgets/b.qml"));
    CHECK(s.component_match == 1);
    CHECK(s.top_dir_match == 1);
    CHECK(s.directory_similarity == 1.0);
    CHECK(s.extension_match == 1);
    CHECK(s.exact_file_match == 1);
    CHECK(s.total() == 5.0);
}

TEST_CASE("sibling directories share a one-segment prefix") {
    // segments: ["src","widgets"] vs ["src","forms"] -> prefix 1 of 2.
    // Value frozen from the independent oracle (component excluded from the
    // directory segment lists; it has its own level).
    const auto expected =
        oracle::pair_levels("ui/src/widgets/b.qml", "ui/src/forms/c.qml");
    CHECK(expected[2] == 0.5);

    auto s = score_file_pair(rp("ui/src/widgets/b.qml"), rp("ui/src/forms/c.qml"));
    CHECK(s.component_match == 1);
    CHECK(s.top_dir_match == 1);
    CHECK(s.directory_similarity == doctest::Approx(0.5));
    CHECK(s.extension_match == 1);
    CHECK(s.exact_file_match == 0);
    CHECK(s.total() == doctest::Approx(3.5));
}

TEST_CASE("fully disjoint paths score zero") {
    auto s = score_file_pair(rp("core/a.cpp"), rp("ui/b.qml"));
    CHECK(s.component_match == 0);
    CHECK(s.top_dir_match == 0);
    CHECK(s.directory_similarity == 0.0);
    CHECK(s.extension_match == 0);
    CHECK(s.exact_file_match == 0);
    CHECK(s.total() == 0.0);
}

TEST_CASE("root-level files in the same component keep the degenerate terms") {
    auto s = score_file_pair(rp("core/main.cpp"), rp("core/other.cpp"));
    CHECK(s.top_dir_match == 1);
    CHECK(s.directory_similarity == 1.0);
    CHECK(s.extension_match == 1);
    CHECK(s.exact_file_match == 0);
}

TEST_CASE("extension comparison is case-insensitive") {
    auto s = score_file_pair(rp("a/x.CPP"), rp("b/y.cpp"));
    CHECK(s.extension_match == 1);
}

TEST_CASE("exact_file_match implies extension_match") {
    std::mt19937 rng(5);
    const std::vector<std::string> names = {"a.cpp", "b.qml", "noext", "x.CPP", "a.b.c"};
    const std::vector<std::string> comps = {"ui", "core"};
    for (int i = 0; i < 500; ++i) {
        RepoPath a, b;
        a.component = comps[rng() % 2];
        b.component = comps[rng() % 2];
        a.filename = names[rng() % names.size()];
        b.filename = names[rng() % names.size()];
        auto s = score_file_pair(a, b);
        if (s.exact_file_match == 1) CHECK(s.extension_match == 1);
        CHECK(s.directory_similarity >= 0.0);
        CHECK(s.directory_similarity <= 1.0);
        CHECK(s.total() >= 0.0);
        CHECK(s.total() <= 5.0);
    }
}

TEST_CASE("best_match selects the argmax and breaks ties lexicographically") {
    SUBCASE("candidate equal to the root file wins with 5.0") {
        auto [chosen, scores] =
            best_match(rp("ui/a/b.qml"), rps({"core/x.cpp", "ui/a/b.qml", "ui/a/c.qml"}));
        CHECK(chosen == rp("ui/a/b.qml"));
        CHECK(scores.total() == 5.0);
    }
    SUBCASE("singleton candidate set returns that candidate") {
        auto [chosen, scores] = best_match(rp("ui/a/b.qml"), rps({"core/x.cpp"}));
        CHECK(chosen == rp("core/x.cpp"));
    }
    SUBCASE("equal totals pick the lexicographically smaller path") {
        // both candidates share only the extension with the root file
        auto [chosen, _] = best_match(rp("ui/a/b.qml"), rps({"zz/q/w.qml", "aa/q/w.qml"}));
        CHECK(chosen == rp("aa/q/w.qml"));
    }
    SUBCASE("empty candidate set is an error") {
        try {
            best_match(rp("ui/a/b.qml"), {});
            FAIL("expected EmptyCandidateSet");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyCandidateSet);
        }
    }
    SUBCASE("argmax beats every candidate and survives permutation") {
        auto candidates = rps({"ui/a/b.qml", "ui/a/c.qml", "ui/x/b.qml", "core/a/b.cpp"});
        auto [_, best] = best_match(rp("ui/a/b.qml"), candidates);
        for (const auto& candidate : candidates) {
            CHECK(best.total() >= score_file_pair(rp("ui/a/b.qml"), candidate).total());
        }
        std::reverse(candidates.begin(), candidates.end());
        auto [__, permuted] = best_match(rp("ui/a/b.qml"), candidates);
        CHECK(permuted.total() == best.total());
        CHECK(permuted.directory_similarity == best.directory_similarity);
    }
}

TEST_CASE("score_issue_pair") {
    SUBCASE("identical file sets average to 1.0 everywhere") {
        auto files = rps({"ui/a/b.qml", "ui/a/c.qml"});
        auto s = score_issue_pair(files, files);
        CHECK(s.component == 1.0);
        CHECK(s.top_dir == 1.0);
        CHECK(s.directory == 1.0);
        CHECK(s.extension == 1.0);
        CHECK(s.exact_file == 1.0);
        CHECK(s.file_match == 1);
    }
    SUBCASE("empty similar set is all zeros") {
        auto s = score_issue_pair(rps({"ui/a/b.qml"}), {});
        CHECK(s.component == 0.0);
        CHECK(s.file_match == 0);
    }
    SUBCASE("half-matched root files average to 0.5 at binary levels") {
        auto s = score_issue_pair(rps({"ui/a/b.qml", "zz/y/x.txt"}), rps({"ui/a/b.qml"}));
        CHECK(s.component == doctest::Approx(0.5));
        CHECK(s.top_dir == doctest::Approx(0.5));
        CHECK(s.extension == doctest::Approx(0.5));
        CHECK(s.exact_file == doctest::Approx(0.5));
        CHECK(s.file_match == 1);
        // cross-check against the oracle
        auto expected = oracle::issue_pair({{"ui/a/b.qml", "zz/y/x.txt"}, {"ui/a/b.qml"}});
        CHECK(s.component == doctest::Approx(expected.levels[0]).epsilon(1e-12));
        CHECK(s.directory == doctest::Approx(expected.levels[2]).epsilon(1e-12));
    }
    SUBCASE("file_match looks at all pairs, not just best matches") {
        // best match for the root file is the same-directory candidate, but
        // a different candidate carries the matching filename
        auto s = score_issue_pair(rps({"ui/a/b.qml"}), rps({"ui/a/zz.qml", "core/x/b.qml"}));
        CHECK(s.file_match == 1);
    }
}

TEST_CASE("aggregate_report averages per issue then across issues") {
    SUBCASE("identity pair propagates 1.0") {
        auto files = rps({"ui/a/b.qml"});
        auto report = aggregate_report({{"r1", {score_issue_pair(files, files)}}});
        for (const auto& [level, rate] : report.per_level_rates) {
            CHECK(rate == doctest::Approx(1.0));
        }
        CHECK(report.issue_pair_count == 1);
        CHECK(report.file_pair_count == 1);
    }
    SUBCASE("two issues at 1.0 and 0.0 average to 0.5") {
        auto files = rps({"ui/a/b.qml"});
        auto ones = score_issue_pair(files, files);
        auto zeros = score_issue_pair(files, rps({"zz/q/w.txt"}));
        auto report = aggregate_report({{"r1", {ones}}, {"r2", {zeros}}});
        CHECK(report.per_level_rates.at("component") == doctest::Approx(0.5));
        CHECK(report.per_level_rates.at("file") == doctest::Approx(0.5));
    }
    SUBCASE("permutation-invariant over issues and pairs") {
        auto a = score_issue_pair(rps({"ui/a/b.qml"}), rps({"ui/a/c.qml"}));
        auto b = score_issue_pair(rps({"core/x.cpp"}), rps({"core/y.cpp", "ui/a/b.qml"}));
        auto r1 = aggregate_report({{"r1", {a, b}}, {"r2", {b}}});
        auto r2 = aggregate_report({{"r2", {b}}, {"r1", {b, a}}});
        for (const auto& [level, rate] : r1.per_level_rates) {
            CHECK(rate == doctest::Approx(r2.per_level_rates.at(level)).epsilon(1e-12));
        }
    }
}

TEST_CASE("randomized aggregate matches the independent oracle") {
    std::mt19937 rng(42);
    const std::vector<std::string> comps = {"ui", "core", "tools"};
    const std::vector<std::string> dirs = {"src", "widgets", "render", "io"};
    const std::vector<std::string> files = {"a.qml", "b.cpp", "c.py", "d.txt", "a.cpp"};

    auto random_path = [&]() {
        std::string path = comps[rng() % comps.size()];
        const int depth = static_cast<int>(rng() % 4);
        for (int i = 0; i < depth; ++i) path += "/" + dirs[rng() % dirs.size()];
        return path + "/" + files[rng() % files.size()];
    };

    std::vector<std::pair<std::string, std::vector<IssuePairScore>>> lib_input;
    std::vector<std::pair<std::string, std::vector<oracle::IssuePair>>> oracle_input;
    for (int issue = 0; issue < 20; ++issue) {
        std::vector<IssuePairScore> lib_pairs;
        std::vector<oracle::IssuePair> oracle_pairs;
        const int n_pairs = 1 + static_cast<int>(rng() % 3);
        for (int p = 0; p < n_pairs; ++p) {
            std::vector<std::string> r_raw, s_raw;
            const int nr = 1 + static_cast<int>(rng() % 4);
            const int ns = static_cast<int>(rng() % 4);
            for (int i = 0; i < nr; ++i) r_raw.push_back(random_path());
            for (int i = 0; i < ns; ++i) s_raw.push_back(random_path());
            lib_pairs.push_back(score_issue_pair(rps(r_raw), rps(s_raw)));
            oracle_pairs.push_back({r_raw, s_raw});
        }
        lib_input.emplace_back("issue" + std::to_string(issue), lib_pairs);
        oracle_input.emplace_back("issue" + std::to_string(issue), oracle_pairs);
    }
    auto report = aggregate_report(lib_input);
    auto expected = oracle::aggregate(oracle_input);
    CHECK(report.per_level_rates.at("component") == doctest::Approx(expected.rates[0]).epsilon(1e-9));
    CHECK(report.per_level_rates.at("top_dir") == doctest::Approx(expected.rates[1]).epsilon(1e-9));
    CHECK(report.per_level_rates.at("directory") == doctest::Approx(expected.rates[2]).epsilon(1e-9));
    CHECK(report.per_level_rates.at("extension") == doctest::Approx(expected.rates[3]).epsilon(1e-9));
    CHECK(report.per_level_rates.at("file") == doctest::Approx(expected.rates[4]).epsilon(1e-9));
}
