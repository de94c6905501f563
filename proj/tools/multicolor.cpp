// multicolor: build a multi-language dependency graph over a repository,
// index code and historical issues, localize new issues to candidate fix
// files, and score the results.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "multicolor/commands.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/eval.hpp"

namespace {

using namespace multicolor;

std::string env_config_path() {
    const char* env = std::getenv("MULTICOLOR_CONFIG");
    return env ? env : "";
}

AppConfig resolve_config(const std::string& flag_path) {
    const std::string path = flag_path.empty() ? env_config_path() : flag_path;
    return load_config(path);
}

GraphMode resolve_mode(const std::string& flag, const AppConfig& config) {
    if (flag.empty()) return config.mode;
    auto mode = graph_mode_from_string(flag);
    if (!mode) throw Error(ErrorCode::BadConfig, "unknown mode '" + flag + "'");
    return *mode;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-language code localization over repository graphs"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (or MULTICOLOR_CONFIG)");

    // build-graph
    auto* build = app.add_subcommand("build-graph", "build graph.json from a repository tree");
    std::string build_root, build_mode, build_out = ".";
    build->add_option("--root", build_root, "repository root directory")->required();
    build->add_option("--mode", build_mode, "python-only|cpp-only|qml-only|mixed");
    build->add_option("--out", build_out, "output directory");

    // index
    auto* index = app.add_subcommand("index", "build bm25.json and sic_index.json");
    std::string index_root, index_graph = "graph.json", index_issues, index_mode = "embed",
                index_out = ".";
    index->add_option("--root", index_root, "repository root directory")->required();
    index->add_option("--graph", index_graph, "graph.json path");
    index->add_option("--issues", index_issues, "historical issue corpus (JSON lines)")->required();
    index->add_option("--sic-mode", index_mode, "embed|summ");
    index->add_option("--out", index_out, "output directory");

    // localize
    auto* loc = app.add_subcommand("localize", "rank candidate fix files for query issues");
    std::string loc_graph = "graph.json", loc_bm25 = "bm25.json", loc_sic = "sic_index.json";
    std::string loc_corpus, loc_issues, loc_variant = "all", loc_out = "results.jsonl";
    int loc_k = 0;
    loc->add_option("--graph", loc_graph, "graph.json path");
    loc->add_option("--bm25", loc_bm25, "bm25.json path");
    loc->add_option("--sic", loc_sic, "sic_index.json path");
    loc->add_option("--corpus", loc_corpus, "historical issue corpus (JSON lines)")->required();
    loc->add_option("--issues", loc_issues, "query issues (JSON lines)")->required();
    loc->add_option("--variant", loc_variant, "code-search|sic-code-search|graph-only|full|all");
    loc->add_option("--k", loc_k, "similar issues to retrieve");
    loc->add_option("--out", loc_out, "results file (JSON lines)");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "score results and write reports");
    std::string eval_results = "results.jsonl", eval_issues, eval_corpus,
                eval_sic = "sic_index.json", eval_out = ".", eval_ks = "1,3,5";
    bool eval_csv = false;
    eval->add_option("--results", eval_results, "results.jsonl path");
    eval->add_option("--issues", eval_issues, "query issues with ground truth")->required();
    eval->add_option("--corpus", eval_corpus, "historical issue corpus")->required();
    eval->add_option("--sic", eval_sic, "sic_index.json path");
    eval->add_option("--out", eval_out, "output directory");
    eval->add_option("--k", eval_ks, "k values: \"5\", \"1,3,5\", or \"1..10\"");
    eval->add_flag("--csv", eval_csv, "also write eval_report.csv");

    // find
    auto* find = app.add_subcommand("find", "look up graph entities by name");
    std::string find_graph = "graph.json", find_name, find_kind;
    find->add_option("--graph", find_graph, "graph.json path");
    find->add_option("--name", find_name, "terminal name to match (case-insensitive)")->required();
    find->add_option("--kind", find_kind, "DIRECTORY|FILE|CLASS|FUNCTION|QML_COMPONENT");

    // traverse
    auto* trav = app.add_subcommand("traverse", "breadth-first expansion from a node");
    std::string trav_graph = "graph.json", trav_start, trav_kinds = "contains,imports",
                trav_dir = "out";
    int trav_hops = 1;
    trav->add_option("--graph", trav_graph, "graph.json path");
    trav->add_option("--start", trav_start, "start node id")->required();
    trav->add_option("--kinds", trav_kinds, "comma list: contains,imports,inherits,invokes");
    trav->add_option("--direction", trav_dir, "out|in|both");
    trav->add_option("--hops", trav_hops, "expansion depth (>= 1)");

    // retrieve
    auto* retr = app.add_subcommand("retrieve", "top-k similar historical issues for a query");
    std::string retr_sic = "sic_index.json", retr_corpus, retr_issues, retr_id;
    int retr_k = 0;
    retr->add_option("--sic", retr_sic, "sic_index.json path");
    retr->add_option("--corpus", retr_corpus, "historical issue corpus")->required();
    retr->add_option("--issues", retr_issues, "query issues (JSON lines)")->required();
    retr->add_option("--id", retr_id, "query issue id (default: all)");
    retr->add_option("--k", retr_k, "similar issues to retrieve");

    CLI11_PARSE(app, argc, argv);

    try {
        AppConfig config = resolve_config(config_path);

        if (build->parsed()) {
            BuildGraphArgs args;
            args.root = build_root;
            args.mode = resolve_mode(build_mode, config);
            args.out_dir = build_out;
            return cmd_build_graph(args, std::cout, std::cerr);
        }
        if (index->parsed()) {
            IndexArgs args;
            args.root = index_root;
            args.graph_path = index_graph;
            args.issues_path = index_issues;
            if (index_mode != "embed" && index_mode != "summ") {
                std::cerr << "unknown --sic-mode '" << index_mode << "'\n";
                return 2;
            }
            args.sic_mode = index_mode == "summ" ? SicMode::Summ : SicMode::Embed;
            args.out_dir = index_out;
            args.config = config;
            return cmd_index(args, std::cout, std::cerr);
        }
        if (loc->parsed()) {
            LocalizeArgs args;
            args.graph_path = loc_graph;
            args.bm25_path = loc_bm25;
            args.sic_path = loc_sic;
            args.corpus_path = loc_corpus;
            args.issues_path = loc_issues;
            args.variant = loc_variant;
            args.out_path = loc_out;
            args.config = config;
            if (loc_k > 0) args.config.k = loc_k;
            return cmd_localize(args, std::cout, std::cerr);
        }
        if (eval->parsed()) {
            EvaluateArgs args;
            args.results_path = eval_results;
            args.issues_path = eval_issues;
            args.corpus_path = eval_corpus;
            args.sic_path = eval_sic;
            args.out_dir = eval_out;
            args.ks = parse_k_list(eval_ks);
            args.write_csv = eval_csv;
            args.config = config;
            return cmd_evaluate(args, std::cout, std::cerr);
        }
        if (find->parsed()) {
            DependencyGraph g = load_graph(find_graph);
            std::optional<EntityKind> kind;
            if (!find_kind.empty()) kind = entity_kind_from_string(find_kind);
            for (const auto& id : find_entities(g, find_name, kind)) {
                std::cout << id << "\n";
            }
            return 0;
        }
        if (trav->parsed()) {
            DependencyGraph g = load_graph(trav_graph);
            std::set<RelationKind> kinds;
            std::istringstream in(trav_kinds);
            std::string token;
            while (std::getline(in, token, ',')) {
                if (token == "contains") kinds.insert(RelationKind::Contains);
                else if (token == "imports") kinds.insert(RelationKind::Imports);
                else if (token == "inherits") kinds.insert(RelationKind::Inherits);
                else if (token == "invokes") kinds.insert(RelationKind::Invokes);
                else {
                    std::cerr << "unknown relation kind '" << token << "'\n";
                    return 2;
                }
            }
            Direction direction = Direction::Out;
            if (trav_dir == "in") direction = Direction::In;
            else if (trav_dir == "both") direction = Direction::Both;
            else if (trav_dir != "out") {
                std::cerr << "unknown direction '" << trav_dir << "'\n";
                return 2;
            }
            if (trav_hops < 1) {
                std::cerr << "--hops must be >= 1\n";
                return 2;
            }
            auto result = traverse(g, trav_start, kinds, direction, trav_hops);
            for (const auto& [id, depth] : result.depth) {
                std::cout << depth << "\t" << id << "\n";
            }
            return 0;
        }
        if (retr->parsed()) {
            AppConfig cfg = config;
            if (retr_k > 0) cfg.k = retr_k;
            auto embedder = make_embedder(cfg);
            NormalizingSummarizer summarizer;
            IssueIndex sic = load_sic_index(retr_sic, embedder->fingerprint());
            auto corpus_issues = load_issues_jsonl(retr_corpus);
            IssueStore corpus = make_issue_store(corpus_issues);
            auto queries = load_issues_jsonl(retr_issues);
            for (const auto& query : queries) {
                if (!retr_id.empty() && query.id != retr_id) continue;
                auto retrieved = retrieve_similar(sic, query, cfg.k, *embedder, summarizer);
                nlohmann::json line;
                line["issue_id"] = query.id;
                auto arr = nlohmann::json::array();
                for (const auto& [id, score] : retrieved) arr.push_back({id, score});
                line["similar"] = std::move(arr);
                std::cout << line.dump() << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
