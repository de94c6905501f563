#include "multicolor/graph.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"
#include "multicolor/errors.hpp"

namespace multicolor {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(GraphMode mode) {
    switch (mode) {
        case GraphMode::PythonOnly: return "python-only";
        case GraphMode::CppOnly: return "cpp-only";
        case GraphMode::QmlOnly: return "qml-only";
        case GraphMode::Mixed: return "mixed";
    }
    return "mixed";
}

std::optional<GraphMode> graph_mode_from_string(std::string_view s) {
    if (s == "python-only" || s == "python") return GraphMode::PythonOnly;
    if (s == "cpp-only" || s == "cpp") return GraphMode::CppOnly;
    if (s == "qml-only" || s == "qml") return GraphMode::QmlOnly;
    if (s == "mixed") return GraphMode::Mixed;
    return std::nullopt;
}

std::vector<Edge> DependencyGraph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& [key, attrs] : edges) {
        out.push_back({key.src, key.dst, key.kind, attrs});
    }
    return out;
}

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(std::string_view data, uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

bool mode_accepts(GraphMode mode, Language lang) {
    switch (mode) {
        case GraphMode::PythonOnly: return lang == Language::Python;
        case GraphMode::CppOnly: return lang == Language::Cpp;
        case GraphMode::QmlOnly: return lang == Language::Qml;
        case GraphMode::Mixed:
            return lang == Language::Python || lang == Language::Cpp || lang == Language::Qml;
    }
    return false;
}

std::string dirname_of(const std::string& path) {
    auto pos = path.rfind('/');
    return pos == std::string::npos ? std::string() : path.substr(0, pos);
}

std::string basename_of(const std::string& path) {
    auto pos = path.rfind('/');
    return pos == std::string::npos ? path : path.substr(pos + 1);
}

// Joins and normalizes "." / ".." segments of a repo-relative path string.
// Returns empty when the path escapes above the first segment.
std::string normalize_join(const std::string& base_dir, const std::string& ref) {
    std::vector<std::string> parts;
    auto push_parts = [&](const std::string& s) {
        std::string cur;
        for (char c : s) {
            if (c == '/' || c == '\\') {
                if (!cur.empty()) parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) parts.push_back(cur);
    };
    push_parts(base_dir);
    push_parts(ref);
    std::vector<std::string> out;
    for (auto& part : parts) {
        if (part == ".") continue;
        if (part == "..") {
            if (out.empty()) return "";
            out.pop_back();
            continue;
        }
        out.push_back(part);
    }
    std::string joined;
    for (size_t i = 0; i < out.size(); ++i) {
        if (i) joined += '/';
        joined += out[i];
    }
    return joined;
}

struct GraphBuilder {
    DependencyGraph g;
    // symbol tables for name-based resolution
    std::map<std::string, std::vector<std::string>> classes_by_name;
    std::map<std::string, std::vector<std::string>> callables_by_name;
    struct Pending {
        RelationKind kind;
        std::string src;
        std::string dst_ref;
        std::map<std::string, std::string> attrs;
    };
    std::vector<Pending> pending;

    void add_node(Node node) {
        auto [it, inserted] = g.nodes.emplace(node.id, node);
        if (!inserted && it->second.kind != node.kind) {
            throw Error(ErrorCode::ConflictingKind,
                        "node '" + node.id + "' declared as both " +
                            std::string(to_string(it->second.kind)) + " and " +
                            to_string(node.kind));
        }
    }

    void add_edge(const std::string& src, const std::string& dst, RelationKind kind,
                  std::map<std::string, std::string> attrs = {}) {
        auto [it, inserted] = g.edges.emplace(EdgeKey{src, dst, kind}, attrs);
        if (!inserted) {
            for (auto& [k, v] : attrs) it->second[k] = v;
        }
    }

    void add_skeleton(const std::string& component,
                      const std::vector<std::string>& file_paths) {
        Node root;
        root.id = component;
        root.kind = EntityKind::Directory;
        root.language = Language::Other;
        root.path = component;
        root.name = component;
        add_node(root);
        for (const auto& path : file_paths) {
            // intermediate directories
            std::string parent = component;
            size_t start = component.size() + 1;
            while (true) {
                size_t slash = path.find('/', start);
                if (slash == std::string::npos) break;
                std::string dir = path.substr(0, slash);
                Node d;
                d.id = dir;
                d.kind = EntityKind::Directory;
                d.language = Language::Other;
                d.path = dir;
                d.name = path.substr(start, slash - start);
                add_node(d);
                add_edge(parent, dir, RelationKind::Contains);
                parent = dir;
                start = slash + 1;
            }
            Node f;
            f.id = path;
            f.kind = EntityKind::File;
            RepoPath rp = parse_repo_path(path);
            f.language = detect_language(rp);
            f.path = path;
            f.name = rp.filename;
            add_node(f);
            add_edge(parent, path, RelationKind::Contains);
            g.files_by_language[to_string(f.language)] += 1;
        }
    }

    void add_unit(const ParsedUnit& unit) {
        const std::string file_id = unit.file.str();
        g.parse_warnings += unit.parse_warnings;

        std::set<std::string> contained;  // dst of intra-unit CONTAINS
        for (const auto& rel : unit.relations) {
            if (rel.kind == RelationKind::Contains) contained.insert(rel.dst_ref);
        }
        for (const auto& entity : unit.entities) {
            Node node;
            node.id = entity.qualified_id;
            node.kind = entity.kind;
            node.language = unit.language;
            node.path = file_id;
            node.name = entity.name;
            node.attrs = entity.attrs;
            node.attrs["start_line"] = std::to_string(entity.start_line);
            node.attrs["end_line"] = std::to_string(entity.end_line);
            add_node(node);
            if (!contained.count(entity.qualified_id)) {
                add_edge(file_id, entity.qualified_id, RelationKind::Contains);
            }
            if (entity.kind == EntityKind::Class) {
                classes_by_name[entity.name].push_back(entity.qualified_id);
                callables_by_name[entity.name].push_back(entity.qualified_id);
            } else if (entity.kind == EntityKind::Function &&
                       unit.language != Language::Qml) {
                callables_by_name[entity.name].push_back(entity.qualified_id);
            }
        }
        for (const auto& rel : unit.relations) {
            if (rel.kind == RelationKind::Contains) {
                add_edge(rel.src_qualified_id, rel.dst_ref, RelationKind::Contains, rel.attrs);
            } else {
                pending.push_back({rel.kind, rel.src_qualified_id, rel.dst_ref, rel.attrs});
            }
        }
    }

    // --- reference resolution -------------------------------------------

    void resolve_import_python(const Pending& p, const std::string& file_dir,
                               const std::string& component) {
        std::string ref = p.dst_ref;
        size_t dots = 0;
        while (dots < ref.size() && ref[dots] == '.') ++dots;
        ref = ref.substr(dots);
        std::string rel_path;
        for (char c : ref) rel_path += (c == '.') ? '/' : c;

        std::vector<std::string> candidates;
        if (dots > 0) {
            std::string base = file_dir;
            for (size_t i = 1; i < dots && !base.empty(); ++i) base = dirname_of(base);
            if (rel_path.empty()) {
                candidates.push_back(normalize_join(base, "__init__.py"));
            } else {
                candidates.push_back(normalize_join(base, rel_path + ".py"));
                candidates.push_back(normalize_join(base, rel_path + "/__init__.py"));
            }
        } else if (!rel_path.empty()) {
            candidates.push_back(normalize_join(component, rel_path + ".py"));
            candidates.push_back(normalize_join(component, rel_path + "/__init__.py"));
            candidates.push_back(normalize_join(file_dir, rel_path + ".py"));
            candidates.push_back(normalize_join(file_dir, rel_path + "/__init__.py"));
        }
        for (const auto& cand : candidates) {
            if (!cand.empty() && g.has_node(cand) && g.nodes.at(cand).kind == EntityKind::File) {
                if (cand != p.src) add_edge(p.src, cand, RelationKind::Imports, p.attrs);
                return;
            }
        }
    }

    void resolve_import_cpp(const Pending& p, const std::string& file_dir,
                            const std::string& component) {
        auto style = p.attrs.find("style");
        if (style != p.attrs.end() && style->second == "angle") return;  // external
        std::map<std::string, std::string> attrs;  // style attr is internal only
        std::string cand = normalize_join(file_dir, p.dst_ref);
        if (!cand.empty() && g.has_node(cand) && g.nodes.at(cand).kind == EntityKind::File) {
            if (cand != p.src) add_edge(p.src, cand, RelationKind::Imports, attrs);
            return;
        }
        cand = normalize_join(component, p.dst_ref);
        if (!cand.empty() && g.has_node(cand) && g.nodes.at(cand).kind == EntityKind::File) {
            if (cand != p.src) add_edge(p.src, cand, RelationKind::Imports, attrs);
            return;
        }
        const std::string base = basename_of(p.dst_ref);
        for (const auto& [id, node] : g.nodes) {
            if (node.kind == EntityKind::File && node.name == base && id != p.src) {
                add_edge(p.src, id, RelationKind::Imports, attrs);
            }
        }
    }

    void resolve_import_qml(const Pending& p, const std::string& file_dir) {
        auto style = p.attrs.find("style");
        if (style == p.attrs.end() || style->second != "path") return;  // module import
        const std::string cand = normalize_join(file_dir, p.dst_ref);
        if (cand.empty() || !g.has_node(cand)) return;
        const Node& target = g.nodes.at(cand);
        if (target.kind == EntityKind::File) {
            if (cand != p.src) add_edge(p.src, cand, RelationKind::Imports);
            return;
        }
        if (target.kind == EntityKind::Directory) {
            for (const auto& [id, node] : g.nodes) {
                if (node.kind == EntityKind::File && node.language == Language::Qml &&
                    id != p.src && dirname_of(id) == cand) {
                    add_edge(p.src, id, RelationKind::Imports);
                }
            }
        }
    }

    void resolve_pending(const std::string& component) {
        for (const auto& p : pending) {
            const Node* src_node = g.has_node(p.src) ? &g.nodes.at(p.src) : nullptr;
            if (!src_node) continue;
            const std::string file_dir = dirname_of(
                src_node->kind == EntityKind::File ? src_node->id : src_node->path);
            switch (p.kind) {
                case RelationKind::Imports: {
                    if (src_node->language == Language::Python)
                        resolve_import_python(p, file_dir, component);
                    else if (src_node->language == Language::Cpp)
                        resolve_import_cpp(p, file_dir, component);
                    else if (src_node->language == Language::Qml)
                        resolve_import_qml(p, file_dir);
                    break;
                }
                case RelationKind::Inherits: {
                    std::string terminal = p.dst_ref;
                    if (auto pos = terminal.rfind("::"); pos != std::string::npos)
                        terminal = terminal.substr(pos + 2);
                    if (auto pos = terminal.rfind('.'); pos != std::string::npos)
                        terminal = terminal.substr(pos + 1);
                    auto it = classes_by_name.find(terminal);
                    if (it == classes_by_name.end()) break;
                    for (const auto& dst : it->second) {
                        if (dst != p.src) add_edge(p.src, dst, RelationKind::Inherits, p.attrs);
                    }
                    break;
                }
                case RelationKind::Invokes: {
                    auto it = callables_by_name.find(p.dst_ref);
                    if (it == callables_by_name.end()) break;
                    for (const auto& dst : it->second) {
                        if (dst != p.src) add_edge(p.src, dst, RelationKind::Invokes);
                    }
                    break;
                }
                case RelationKind::Contains:
                    break;
            }
        }
        pending.clear();
    }
};

DependencyGraph build_from_listing(const std::string& component,
                                   const std::vector<std::pair<std::string, std::string>>& files,
                                   GraphMode mode) {
    GraphBuilder builder;
    builder.g.mode = mode;
    builder.g.component = component;

    std::vector<std::string> paths;
    paths.reserve(files.size());
    for (const auto& [path, _] : files) paths.push_back(path);
    builder.add_skeleton(component, paths);

    // snapshot fingerprint over sorted path+content
    uint64_t h = kFnvOffset;
    for (const auto& [path, content] : files) {
        h = fnv1a(path, h);
        h = fnv1a("\0", h);
        h = fnv1a(content, h);
    }
    builder.g.snapshot = hex64(h);

    // parse in parallel, unify in deterministic (sorted) order
    std::vector<std::future<ParsedUnit>> jobs;
    for (size_t i = 0; i < files.size(); ++i) {
        RepoPath rp = parse_repo_path(files[i].first);
        if (!mode_accepts(mode, detect_language(rp))) continue;
        const std::string* source = &files[i].second;
        jobs.push_back(std::async(std::launch::async,
                                  [rp, source] { return parse_source(rp, *source); }));
    }
    for (auto& job : jobs) {
        builder.add_unit(job.get());
    }
    builder.resolve_pending(component);
    return std::move(builder.g);
}

}  // namespace

DependencyGraph build_graph_from_memory(const std::string& component,
                                        const std::map<std::string, std::string>& files,
                                        GraphMode mode) {
    std::vector<std::pair<std::string, std::string>> listing(files.begin(), files.end());
    return build_from_listing(component, listing, mode);
}

DependencyGraph build_graph(const std::string& root, GraphMode mode) {
    fs::path root_path(root);
    std::error_code ec;
    if (!fs::exists(root_path, ec) || !fs::is_directory(root_path, ec)) {
        throw Error(ErrorCode::IoError, "root '" + root + "' is not a readable directory");
    }
    std::string component = root_path.filename().string();
    if (component.empty()) component = root_path.parent_path().filename().string();
    if (component.empty()) component = "repo";

    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> dirs;  // relative, for empty directories
    for (auto it = fs::recursive_directory_iterator(root_path, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw Error(ErrorCode::IoError, "walk failed under '" + root + "': " + ec.message());
        const fs::path rel = fs::relative(it->path(), root_path);
        std::string rel_str = rel.generic_string();
        if (it->is_directory()) {
            dirs.push_back(component + "/" + rel_str);
            continue;
        }
        if (!it->is_regular_file()) continue;
        std::ifstream in(it->path(), std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot read '" + it->path().string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        files.emplace_back(component + "/" + rel_str, buf.str());
    }
    std::sort(files.begin(), files.end());
    std::sort(dirs.begin(), dirs.end());

    DependencyGraph g = build_from_listing(component, files, mode);
    // empty directories still get DIRECTORY nodes
    for (const auto& dir : dirs) {
        if (!g.has_node(dir)) {
            Node d;
            d.id = dir;
            d.kind = EntityKind::Directory;
            d.language = Language::Other;
            d.path = dir;
            d.name = basename_of(dir);
            g.nodes.emplace(d.id, d);
            const std::string parent = dirname_of(dir);
            if (g.has_node(parent)) {
                g.edges.emplace(EdgeKey{parent, dir, RelationKind::Contains},
                                std::map<std::string, std::string>{});
            }
        }
    }
    return g;
}

DependencyGraph merge_graphs(const std::vector<DependencyGraph>& parts) {
    DependencyGraph merged;
    merged.mode = GraphMode::Mixed;
    for (const auto& part : parts) {
        if (merged.component.empty()) merged.component = part.component;
        if (merged.snapshot.empty()) merged.snapshot = part.snapshot;
        for (const auto& [id, node] : part.nodes) {
            auto [it, inserted] = merged.nodes.emplace(id, node);
            if (!inserted) {
                if (it->second.kind != node.kind) {
                    throw Error(ErrorCode::ConflictingKind,
                                "node '" + id + "' declared as both " +
                                    std::string(to_string(it->second.kind)) + " and " +
                                    to_string(node.kind));
                }
                for (const auto& [k, v] : node.attrs) it->second.attrs[k] = v;
            }
        }
        for (const auto& [key, attrs] : part.edges) {
            auto [it, inserted] = merged.edges.emplace(key, attrs);
            if (!inserted) {
                for (const auto& [k, v] : attrs) it->second[k] = v;
            }
        }
        for (const auto& [lang, n] : part.files_by_language) {
            merged.files_by_language[lang] = std::max(merged.files_by_language[lang], n);
        }
        merged.parse_warnings += part.parse_warnings;
    }
    return merged;
}

std::vector<std::string> find_entities(const DependencyGraph& g, const std::string& name_query,
                                       std::optional<EntityKind> kind_filter) {
    std::vector<std::string> out;
    if (name_query.empty()) return out;
    const std::string wanted = ascii_lower(name_query);
    for (const auto& [id, node] : g.nodes) {
        if (kind_filter && node.kind != *kind_filter) continue;
        if (ascii_lower(node.name) == wanted) out.push_back(id);
    }
    return out;  // map iteration is already lexicographic
}

TraversalResult traverse(const DependencyGraph& g, const std::string& start,
                         const std::set<RelationKind>& kinds, Direction direction, int hops) {
    if (!g.has_node(start)) {
        throw Error(ErrorCode::UnknownNode, "start node '" + start + "' is not in the graph");
    }
    std::map<std::string, std::vector<std::string>> out_adj, in_adj;
    for (const auto& [key, _] : g.edges) {
        if (!kinds.count(key.kind)) continue;
        out_adj[key.src].push_back(key.dst);
        in_adj[key.dst].push_back(key.src);
    }

    TraversalResult result;
    result.depth[start] = 0;
    std::deque<std::string> frontier{start};
    while (!frontier.empty()) {
        const std::string id = frontier.front();
        frontier.pop_front();
        const int d = result.depth[id];
        if (d >= hops) continue;
        auto expand = [&](const std::map<std::string, std::vector<std::string>>& adj) {
            auto it = adj.find(id);
            if (it == adj.end()) return;
            for (const auto& next : it->second) {
                if (!result.depth.count(next)) {
                    result.depth[next] = d + 1;
                    frontier.push_back(next);
                }
            }
        };
        if (direction == Direction::Out || direction == Direction::Both) expand(out_adj);
        if (direction == Direction::In || direction == Direction::Both) expand(in_adj);
    }
    for (const auto& [key, attrs] : g.edges) {
        if (!kinds.count(key.kind)) continue;
        if (result.depth.count(key.src) && result.depth.count(key.dst)) {
            result.edges.push_back({key.src, key.dst, key.kind, attrs});
        }
    }
    return result;
}

DependencyGraph restrict_scope(const DependencyGraph& g, const std::vector<std::string>& prefixes) {
    DependencyGraph out;
    out.mode = g.mode;
    out.component = g.component;
    out.snapshot = g.snapshot;
    if (prefixes.empty()) return out;

    std::set<std::string> keep;
    for (const auto& [id, node] : g.nodes) {
        for (const auto& prefix : prefixes) {
            if (path_has_prefix(node.path, prefix)) {
                keep.insert(id);
                // directory ancestors along the CONTAINS forest
                std::string dir = dirname_of(node.path);
                while (!dir.empty()) {
                    if (g.has_node(dir)) keep.insert(dir);
                    dir = dirname_of(dir);
                }
                break;
            }
        }
    }
    for (const auto& id : keep) out.nodes.emplace(id, g.nodes.at(id));
    for (const auto& [key, attrs] : g.edges) {
        if (keep.count(key.src) && keep.count(key.dst)) out.edges.emplace(key, attrs);
    }
    return out;
}

std::string graph_to_json(const DependencyGraph& g) {
    json doc;
    doc["mode"] = to_string(g.mode);
    doc["component"] = g.component;
    doc["snapshot"] = g.snapshot;
    auto nodes = json::array();
    for (const auto& [id, node] : g.nodes) {
        json n;
        n["id"] = id;
        n["kind"] = to_string(node.kind);
        n["language"] = to_string(node.language);
        n["path"] = node.path;
        n["name"] = node.name;
        if (!node.attrs.empty()) n["attrs"] = node.attrs;
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);
    auto edges = json::array();
    for (const auto& [key, attrs] : g.edges) {
        json e;
        e["src"] = key.src;
        e["dst"] = key.dst;
        e["kind"] = to_string(key.kind);
        if (!attrs.empty()) e["attrs"] = attrs;
        edges.push_back(std::move(e));
    }
    doc["edges"] = std::move(edges);
    doc["stats"] = {{"files_by_language", g.files_by_language},
                    {"parse_warnings", g.parse_warnings}};
    return doc.dump(2) + "\n";
}

DependencyGraph graph_from_json(const std::string& text) {
    json doc = json::parse(text);
    DependencyGraph g;
    auto mode = graph_mode_from_string(doc.at("mode").get<std::string>());
    if (!mode) throw Error(ErrorCode::BadConfig, "unknown graph mode in graph file");
    g.mode = *mode;
    g.component = doc.value("component", "");
    g.snapshot = doc.value("snapshot", "");
    for (const auto& n : doc.at("nodes")) {
        Node node;
        node.id = n.at("id").get<std::string>();
        node.kind = entity_kind_from_string(n.at("kind").get<std::string>());
        node.language = language_from_string(n.at("language").get<std::string>());
        node.path = n.at("path").get<std::string>();
        node.name = n.at("name").get<std::string>();
        if (n.contains("attrs")) node.attrs = n.at("attrs").get<std::map<std::string, std::string>>();
        g.nodes.emplace(node.id, std::move(node));
    }
    for (const auto& e : doc.at("edges")) {
        EdgeKey key{e.at("src").get<std::string>(), e.at("dst").get<std::string>(),
                    relation_kind_from_string(e.at("kind").get<std::string>())};
        std::map<std::string, std::string> attrs;
        if (e.contains("attrs")) attrs = e.at("attrs").get<std::map<std::string, std::string>>();
        g.edges.emplace(std::move(key), std::move(attrs));
    }
    if (doc.contains("stats")) {
        const auto& stats = doc.at("stats");
        if (stats.contains("files_by_language"))
            g.files_by_language = stats.at("files_by_language").get<std::map<std::string, int>>();
        g.parse_warnings = stats.value("parse_warnings", 0);
    }
    return g;
}

void save_graph(const DependencyGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << graph_to_json(g);
}

DependencyGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_json(buf.str());
}

}  // namespace multicolor
