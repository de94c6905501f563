#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multicolor/parse.hpp"
#include "multicolor/repo_path.hpp"

namespace multicolor {

enum class GraphMode { PythonOnly, CppOnly, QmlOnly, Mixed };

const char* to_string(GraphMode mode);
std::optional<GraphMode> graph_mode_from_string(std::string_view s);

struct Node {
    std::string id;
    EntityKind kind = EntityKind::File;
    Language language = Language::Other;
    std::string path;  // the node's own path for dirs/files, containing file otherwise
    std::string name;
    std::map<std::string, std::string> attrs;
};

struct Edge {
    std::string src;
    std::string dst;
    RelationKind kind = RelationKind::Contains;
    std::map<std::string, std::string> attrs;
};

struct EdgeKey {
    std::string src;
    std::string dst;
    RelationKind kind;
    auto operator<=>(const EdgeKey&) const = default;
};

/// Heterogeneous repository graph: directories, files, and parsed code
/// entities joined by CONTAINS / IMPORTS / INHERITS / INVOKES edges.
/// Immutable after construction; readers need no synchronization.
struct DependencyGraph {
    GraphMode mode = GraphMode::Mixed;
    std::string component;
    std::string snapshot;  // content fingerprint of the indexed tree
    std::map<std::string, Node> nodes;
    std::map<EdgeKey, std::map<std::string, std::string>> edges;
    std::map<std::string, int> files_by_language;
    int parse_warnings = 0;

    bool has_node(const std::string& id) const { return nodes.count(id) > 0; }
    std::vector<Edge> edge_list() const;
    size_t edge_count() const { return edges.size(); }
};

/// Walks `root`, builds the directory/file skeleton, parses files whose
/// language matches `mode`, resolves repository-internal references, and
/// drops external ones. Throws Error{IoError} when root is unreadable.
DependencyGraph build_graph(const std::string& root, GraphMode mode);

/// In-memory variant used by tests: `files` maps repo-relative paths
/// (component-prefixed) to source text.
DependencyGraph build_graph_from_memory(const std::string& component,
                                        const std::map<std::string, std::string>& files,
                                        GraphMode mode);

/// Unions parts by qualified id; later parts win attribute conflicts,
/// duplicate (src,dst,kind) edges collapse. Throws Error{ConflictingKind}
/// when one id maps to different entity kinds.
DependencyGraph merge_graphs(const std::vector<DependencyGraph>& parts);

/// Case-insensitive exact match on the terminal name segment; empty query
/// matches nothing. Results sorted lexicographically.
std::vector<std::string> find_entities(const DependencyGraph& g, const std::string& name_query,
                                       std::optional<EntityKind> kind_filter = std::nullopt);

enum class Direction { Out, In, Both };

struct TraversalResult {
    std::map<std::string, int> depth;  // node id -> hops from start
    std::vector<Edge> edges;           // induced edges of the requested kinds
};

/// Breadth-first expansion over the requested edge kinds/direction.
/// Throws Error{UnknownNode} when start is absent; hops must be >= 1.
TraversalResult traverse(const DependencyGraph& g, const std::string& start,
                         const std::set<RelationKind>& kinds, Direction direction, int hops);

/// Induced subgraph of nodes whose path falls under any prefix, plus their
/// directory ancestors. An empty prefix list yields an empty graph.
DependencyGraph restrict_scope(const DependencyGraph& g, const std::vector<std::string>& prefixes);

std::string graph_to_json(const DependencyGraph& g);
DependencyGraph graph_from_json(const std::string& text);
void save_graph(const DependencyGraph& g, const std::string& path);
DependencyGraph load_graph(const std::string& path);

}  // namespace multicolor
