#include <random>

#include "doctest.h"
#include "multicolor/bm25.hpp"
#include "multicolor/errors.hpp"
#include "oracles.hpp"

using namespace multicolor;

namespace {

IndexableUnit make_unit(const std::string& id, const std::string& file,
                        std::vector<std::string> tokens) {
    IndexableUnit unit;
    unit.unit_id = id;
    unit.file = parse_repo_path(file);
    unit.kind = EntityKind::File;
    unit.tokens = std::move(tokens);
    return unit;
}

std::vector<IndexableUnit> fixture_corpus() {
    return {
        make_unit("u01", "repo/a/one.cpp", {"alpha", "beta", "gamma", "alpha"}),
        make_unit("u02", "repo/a/two.cpp", {"beta", "delta"}),
        make_unit("u03", "repo/b/three.cpp", {"gamma", "gamma", "epsilon", "zeta"}),
        make_unit("u04", "repo/b/four.py", {"alpha", "zeta", "eta"}),
        make_unit("u05", "repo/b/five.py", {"theta"}),
        make_unit("u06", "repo/c/six.qml", {"iota", "kappa", "beta", "beta", "beta"}),
        make_unit("u07", "repo/c/seven.qml", {"lambda", "mu"}),
        make_unit("u08", "repo/c/eight.qml", {"nu", "xi", "alpha", "gamma"}),
        make_unit("u09", "repo/d/nine.h", {"omicron", "pi", "rho"}),
        make_unit("u10", "repo/d/ten.h", {"sigma", "tau", "upsilon", "pi"}),
    };
}

std::vector<oracle::Bm25Doc> to_oracle(const std::vector<IndexableUnit>& units) {
    std::vector<oracle::Bm25Doc> docs;
    for (const auto& unit : units) docs.push_back({unit.unit_id, unit.tokens});
    return docs;
}

}  // namespace

TEST_CASE("build_bm25 on a singleton corpus") {
    Bm25Index idx = build_bm25({make_unit("u", "repo/f.cpp", {"alpha"})});
    CHECK(idx.doc_count() == 1);
    REQUIRE(idx.postings.count("alpha"));
    CHECK(idx.postings.at("alpha").size() == 1);
    CHECK(idx.postings.at("alpha")[0] == std::pair<std::string, int>{"u", 1});
    CHECK(idx.avg_doc_length == doctest::Approx(1.0));
}

TEST_CASE("build_bm25 rejects duplicate unit ids") {
    try {
        build_bm25({make_unit("u", "repo/f.cpp", {"a"}), make_unit("u", "repo/g.cpp", {"b"})});
        FAIL("expected DuplicateUnit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DuplicateUnit);
    }
}

TEST_CASE("disjoint vocabularies hit exactly one posting list") {
    Bm25Index idx = build_bm25(
        {make_unit("u1", "repo/f.cpp", {"aaa", "bbb"}), make_unit("u2", "repo/g.cpp", {"ccc"})});
    auto res = query_bm25(idx, {"ccc"}, 10);
    REQUIRE(res.size() == 1);
    CHECK(res[0].first == "u2");
}

TEST_CASE("a unique query term dominates the ranking") {
    Bm25Index idx = build_bm25(fixture_corpus());
    auto res = query_bm25(idx, {"theta"}, 10);
    REQUIRE_FALSE(res.empty());
    CHECK(res[0].first == "u05");
}

TEST_CASE("scope filters candidates before ranking") {
    Bm25Index idx = build_bm25(fixture_corpus());
    std::vector<std::string> scope = {"repo/d"};
    auto res = query_bm25(idx, {"alpha"}, 10, &scope);
    CHECK(res.empty());  // alpha only lives outside repo/d
    std::vector<std::string> scope_b = {"repo/b"};
    auto res_b = query_bm25(idx, {"alpha"}, 10, &scope_b);
    REQUIRE(res_b.size() == 1);
    CHECK(res_b[0].first == "u04");
}

TEST_CASE("scores and ranking equal the brute-force oracle") {
    auto units = fixture_corpus();
    Bm25Index idx = build_bm25(units);
    auto docs = to_oracle(units);

    const std::vector<std::vector<std::string>> queries = {
        {"alpha"}, {"beta", "gamma"}, {"pi"}, {"alpha", "alpha", "zeta"}, {"missing"},
        {"beta", "beta", "theta", "pi"},
    };
    for (const auto& query : queries) {
        auto got = query_bm25(idx, query, 100);
        auto expected = oracle::bm25_rank(docs, query, idx.params.k1, idx.params.b);
        REQUIRE(got.size() == expected.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].first == expected[i].first);
            CHECK(got[i].second == doctest::Approx(expected[i].second).epsilon(1e-9));
        }
    }
}

TEST_CASE("ranking is invariant under index insertion order") {
    auto units = fixture_corpus();
    Bm25Index forward = build_bm25(units);
    std::reverse(units.begin(), units.end());
    Bm25Index reversed = build_bm25(units);
    auto a = query_bm25(forward, {"beta", "gamma", "alpha"}, 10);
    auto b = query_bm25(reversed, {"beta", "gamma", "alpha"}, 10);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-12));
    }
}

TEST_CASE("scope filtering never improves another unit's rank") {
    Bm25Index idx = build_bm25(fixture_corpus());
    auto full = query_bm25(idx, {"alpha", "gamma"}, 100);
    std::vector<std::string> scope = {"repo/a", "repo/b"};
    auto scoped = query_bm25(idx, {"alpha", "gamma"}, 100, &scope);
    // scoped result = full result minus filtered units, order preserved
    std::vector<std::string> full_filtered;
    for (const auto& [id, _] : full) {
        if (idx.units.at(id).file.rfind("repo/a", 0) == 0 ||
            idx.units.at(id).file.rfind("repo/b", 0) == 0) {
            full_filtered.push_back(id);
        }
    }
    REQUIRE(scoped.size() == full_filtered.size());
    for (size_t i = 0; i < scoped.size(); ++i) CHECK(scoped[i].first == full_filtered[i]);
}

TEST_CASE("rank_files keeps each file's best unit score") {
    std::vector<IndexableUnit> units = {
        make_unit("repo/f.cpp", "repo/f.cpp", {"alpha", "beta"}),
        make_unit("repo/f.cpp::fn", "repo/f.cpp", {"alpha", "alpha", "alpha"}),
        make_unit("repo/g.cpp", "repo/g.cpp", {"alpha"}),
    };
    Bm25Index idx = build_bm25(units);
    auto files = rank_files(idx, {"alpha"}, 10);
    REQUIRE(files.size() == 2);
    auto best_unit = query_bm25(idx, {"alpha"}, 1);
    CHECK(files[0].second == doctest::Approx(best_unit[0].second));
}

TEST_CASE("planted unique tokens rank first over randomized corpora") {
    std::mt19937 rng(1234);
    const std::vector<std::string> vocab = {"alpha", "beta",  "gamma", "delta", "epsilon",
                                            "zeta",  "eta",   "theta", "iota",  "kappa"};
    for (int round = 0; round < 100; ++round) {
        std::vector<IndexableUnit> units;
        const int n = 5 + static_cast<int>(rng() % 10);
        for (int u = 0; u < n; ++u) {
            std::vector<std::string> tokens;
            const int len = 3 + static_cast<int>(rng() % 20);
            for (int t = 0; t < len; ++t) tokens.push_back(vocab[rng() % vocab.size()]);
            units.push_back(make_unit("u" + std::to_string(u),
                                      "repo/f" + std::to_string(u) + ".cpp", tokens));
        }
        const int planted = static_cast<int>(rng() % n);
        units[planted].tokens.push_back("uniquetoken" + std::to_string(round));
        Bm25Index idx = build_bm25(units);
        auto res = query_bm25(idx, {"uniquetoken" + std::to_string(round)}, 5);
        REQUIRE_FALSE(res.empty());
        CHECK(res[0].first == "u" + std::to_string(planted));
    }
}

TEST_CASE("bm25 JSON round-trip preserves scoring") {
    Bm25Index idx = build_bm25(fixture_corpus());
    idx.graph_snapshot = "deadbeef";
    Bm25Index back = bm25_from_json(bm25_to_json(idx));
    CHECK(back.graph_snapshot == "deadbeef");
    auto a = query_bm25(idx, {"beta", "gamma"}, 10);
    auto b = query_bm25(back, {"beta", "gamma"}, 10);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-12));
    }
}
