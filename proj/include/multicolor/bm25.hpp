#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multicolor/graph.hpp"
#include "multicolor/repo_path.hpp"

namespace multicolor {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// One retrievable unit: a FUNCTION / CLASS / QML_COMPONENT body or a
/// whole file, pre-tokenized with the identifier tokenizer.
struct IndexableUnit {
    std::string unit_id;
    RepoPath file;
    EntityKind kind = EntityKind::File;
    std::vector<std::string> tokens;
};

class Bm25Index {
public:
    struct UnitInfo {
        std::string file;  // canonical path string
        EntityKind kind = EntityKind::File;
        int length = 0;
    };

    Bm25Params params;
    std::string graph_snapshot;
    std::map<std::string, std::vector<std::pair<std::string, int>>> postings;  // term -> (unit, tf)
    std::map<std::string, UnitInfo> units;
    double avg_doc_length = 0.0;

    size_t doc_count() const { return units.size(); }
};

/// Okapi BM25 statistics over the units. Throws Error{DuplicateUnit} on a
/// repeated unit_id.
Bm25Index build_bm25(const std::vector<IndexableUnit>& units, Bm25Params params = {});

/// Okapi scoring over the query token multiset. Units outside `scope`
/// (path-prefix list) are filtered out before ranking; ties break on
/// lexicographic unit_id. Empty query yields an empty result.
std::vector<std::pair<std::string, double>> query_bm25(
    const Bm25Index& idx, const std::vector<std::string>& query, int top_n,
    const std::vector<std::string>* scope = nullptr);

/// As query_bm25, but entity hits are mapped onto their containing file and
/// each file keeps its best unit score.
std::vector<std::pair<std::string, double>> rank_files(
    const Bm25Index& idx, const std::vector<std::string>& query, int top_n,
    const std::vector<std::string>* scope = nullptr);

/// Extracts indexable units from a built graph: one unit per parsed entity
/// span plus one whole-file unit per file matching the graph's mode.
/// `load_file` returns the source text for a repo path, or nullopt.
std::vector<IndexableUnit> collect_indexable_units(
    const DependencyGraph& g,
    const std::function<std::optional<std::string>(const std::string&)>& load_file);

std::string bm25_to_json(const Bm25Index& idx);
Bm25Index bm25_from_json(const std::string& text);
void save_bm25(const Bm25Index& idx, const std::string& path);
Bm25Index load_bm25(const std::string& path);

}  // namespace multicolor
