#include "multicolor/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/eval.hpp"
#include "multicolor/similarity.hpp"
#include "multicolor/tokenize.hpp"

namespace multicolor {

namespace fs = std::filesystem;
using nlohmann::json;

LocalizeConfig AppConfig::localize_config() const {
    LocalizeConfig cfg;
    cfg.k = k;
    cfg.max_results = max_results;
    cfg.w_sic = w_sic;
    cfg.w_bm25 = w_bm25;
    cfg.w_graph = w_graph;
    return cfg;
}

AppConfig load_config(const std::string& path) {
    AppConfig config;
    if (path.empty()) return config;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadConfig, "cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig, "config '" + path + "': " + e.what());
    }
    if (doc.contains("mode")) {
        auto mode = graph_mode_from_string(doc.at("mode").get<std::string>());
        if (!mode) throw Error(ErrorCode::BadConfig, "unknown mode in config");
        config.mode = *mode;
    }
    config.k = doc.value("k", config.k);
    config.max_results = doc.value("max_results", config.max_results);
    if (doc.contains("weights")) {
        const auto& w = doc.at("weights");
        config.w_sic = w.value("sic", config.w_sic);
        config.w_bm25 = w.value("bm25", config.w_bm25);
        config.w_graph = w.value("graph", config.w_graph);
        if (config.w_sic < 0 || config.w_bm25 < 0 || config.w_graph < 0) {
            throw Error(ErrorCode::BadConfig, "weights must be non-negative");
        }
    }
    if (doc.contains("bm25")) {
        config.bm25.k1 = doc.at("bm25").value("k1", config.bm25.k1);
        config.bm25.b = doc.at("bm25").value("b", config.bm25.b);
    }
    config.richness_threshold = doc.value("richness_threshold", config.richness_threshold);
    config.verbosity_scale = doc.value("verbosity_scale", config.verbosity_scale);
    config.embedder = doc.value("embedder", config.embedder);
    config.embedding_dim = doc.value("embedding_dim", config.embedding_dim);
    config.out_dir = doc.value("out_dir", config.out_dir);
    if (config.k < 1 || config.max_results < 1) {
        throw Error(ErrorCode::BadConfig, "k and max_results must be >= 1");
    }
    return config;
}

std::unique_ptr<Embedder> make_embedder(const AppConfig& config) {
    if (config.embedder == "hashed") {
        return std::make_unique<HashedEmbedder>(config.embedding_dim);
    }
    throw Error(ErrorCode::BadConfig, "unknown embedder '" + config.embedder + "'");
}

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Maps a repo path "component/rel/path" back onto disk under `root`
// (whose basename is the component).
std::optional<std::string> load_repo_file(const std::string& root, const std::string& repo_path) {
    auto slash = repo_path.find('/');
    if (slash == std::string::npos) return std::nullopt;
    fs::path full = fs::path(root) / repo_path.substr(slash + 1);
    return read_file(full.string());
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir + "': " + ec.message());
}

}  // namespace

int cmd_build_graph(const BuildGraphArgs& args, std::ostream& out, std::ostream& err) {
    try {
        DependencyGraph graph = build_graph(args.root, args.mode);
        ensure_dir(args.out_dir);
        const std::string path = (fs::path(args.out_dir) / "graph.json").string();
        save_graph(graph, path);
        out << "graph: " << graph.nodes.size() << " nodes, " << graph.edge_count() << " edges ("
            << to_string(graph.mode) << ")\n";
        for (const auto& [lang, count] : graph.files_by_language) {
            out << "  files " << lang << ": " << count << "\n";
        }
        out << "  parse warnings: " << graph.parse_warnings << "\n";
        out << "wrote " << path << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }
}

int cmd_index(const IndexArgs& args, std::ostream& out, std::ostream& err) {
    try {
        DependencyGraph graph = load_graph(args.graph_path);
        auto embedder = make_embedder(args.config);
        NormalizingSummarizer summarizer;

        auto units = collect_indexable_units(graph, [&](const std::string& repo_path) {
            return load_repo_file(args.root, repo_path);
        });
        Bm25Index bm25 = build_bm25(units, args.config.bm25);
        bm25.graph_snapshot = graph.snapshot;

        auto issues = load_issues_jsonl(args.issues_path);
        IssueIndex sic = index_issues(issues, args.sic_mode, *embedder, summarizer);

        ensure_dir(args.out_dir);
        const std::string bm25_path = (fs::path(args.out_dir) / "bm25.json").string();
        const std::string sic_path = (fs::path(args.out_dir) / "sic_index.json").string();
        save_bm25(bm25, bm25_path);
        save_sic_index(sic, sic_path);
        out << "bm25: " << bm25.doc_count() << " units, " << bm25.postings.size() << " terms\n";
        out << "sic: " << sic.entries.size() << " issues (" << to_string(sic.mode)
            << ", dim " << sic.dimension << ")\n";
        out << "wrote " << bm25_path << " and " << sic_path << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }
}

int cmd_localize(const LocalizeArgs& args, std::ostream& out, std::ostream& err) {
    try {
        DependencyGraph graph = load_graph(args.graph_path);
        Bm25Index bm25 = load_bm25(args.bm25_path);
        auto embedder = make_embedder(args.config);
        NormalizingSummarizer summarizer;
        IssueIndex sic = load_sic_index(args.sic_path, embedder->fingerprint());
        auto corpus_issues = load_issues_jsonl(args.corpus_path);
        IssueStore corpus = make_issue_store(corpus_issues);
        auto queries = load_issues_jsonl(args.issues_path);

        std::vector<Variant> variants;
        if (args.variant == "all") {
            variants = all_variants();
        } else {
            auto v = variant_from_string(args.variant);
            if (!v) {
                err << "unknown variant '" << args.variant
                    << "' (expected code-search|sic-code-search|graph-only|full|all)\n";
                return 2;
            }
            variants = {*v};
        }

        Localizer localizer(graph, bm25, &sic, &corpus, embedder.get(), &summarizer,
                            args.config.localize_config());
        std::ofstream results(args.out_path, std::ios::binary);
        if (!results) throw Error(ErrorCode::IoError, "cannot write '" + args.out_path + "'");
        size_t lines = 0;
        for (const auto& query : queries) {
            for (Variant v : variants) {
                results << localization_result_to_json(localizer.run(query, v)) << "\n";
                ++lines;
            }
        }
        out << "localized " << queries.size() << " issues x " << variants.size()
            << " variants -> " << args.out_path << " (" << lines << " records)\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }
}

std::vector<int> parse_k_list(const std::string& spec) {
    std::vector<int> ks;
    if (auto dots = spec.find(".."); dots != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        for (int k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
        std::string token;
        std::istringstream in(spec);
        while (std::getline(in, token, ',')) {
            if (!token.empty()) ks.push_back(std::stoi(token));
        }
    }
    for (int k : ks) {
        if (k < 1) throw Error(ErrorCode::BadConfig, "k values must be >= 1");
    }
    if (ks.empty()) throw Error(ErrorCode::BadConfig, "empty k list");
    return ks;
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        auto queries = load_issues_jsonl(args.issues_path);
        auto corpus_issues = load_issues_jsonl(args.corpus_path);
        IssueStore corpus = make_issue_store(corpus_issues);
        auto embedder = make_embedder(args.config);
        NormalizingSummarizer summarizer;
        IssueIndex sic = load_sic_index(args.sic_path, embedder->fingerprint());

        // results grouped by variant
        std::ifstream results_in(args.results_path, std::ios::binary);
        if (!results_in) {
            throw Error(ErrorCode::IoError, "cannot read '" + args.results_path + "'");
        }
        std::map<std::string, std::vector<LocalizationResult>> by_variant;
        std::string line;
        while (std::getline(results_in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            LocalizationResult result = localization_result_from_json(line);
            by_variant[to_string(result.variant)].push_back(std::move(result));
        }
        if (by_variant.empty()) {
            throw Error(ErrorCode::EmptyCorpus, "no localization results in " + args.results_path);
        }

        IssueStore query_store = make_issue_store(queries);
        std::map<std::string, std::vector<EvalRecord>> records;
        for (const auto& [variant, results] : by_variant) {
            for (const auto& result : results) {
                auto it = query_store.find(result.issue_id);
                if (it == query_store.end()) continue;
                EvalRecord record;
                record.issue_id = result.issue_id;
                record.ground_truth = it->second.changed_files;
                for (const auto& entry : result.ranked_files) {
                    record.predicted.push_back(parse_repo_path(entry.path));
                }
                record.tool_calls = result.tool_calls;
                record.richness = classify_richness(it->second, args.config.richness_threshold,
                                                    args.config.verbosity_scale);
                records[variant].push_back(std::move(record));
            }
        }

        // retrieval-side metrics recomputed from the index
        std::map<std::string, std::vector<std::string>> retrieved_map;
        std::vector<std::pair<std::string, std::vector<IssuePairScore>>> similarity_pairs;
        for (const auto& query : queries) {
            auto retrieved = retrieve_similar(sic, query, args.config.k, *embedder, summarizer);
            auto& ids = retrieved_map[query.id];
            std::vector<IssuePairScore> pair_scores;
            for (const auto& [id, score] : retrieved) {
                ids.push_back(id);
                if (!query.changed_files.empty()) {
                    pair_scores.push_back(
                        score_issue_pair(query.changed_files, corpus.at(id).changed_files));
                }
            }
            if (!pair_scores.empty()) similarity_pairs.emplace_back(query.id, pair_scores);
        }
        const double match_rate = sic_match_rate(queries, retrieved_map, corpus);
        SimilarityReport similarity = aggregate_report(similarity_pairs);

        const CodeTermHistogram hist = code_term_histogram(queries);
        size_t rich = 0, sparse = 0;
        for (const auto& query : queries) {
            const auto label = classify_richness(query, args.config.richness_threshold,
                                                 args.config.verbosity_scale);
            (label.label == Richness::Rich ? rich : sparse) += 1;
        }

        // assemble the report
        json report;
        report["config"] = {{"ks", args.ks},
                            {"k", args.config.k},
                            {"richness_threshold", args.config.richness_threshold},
                            {"verbosity_scale", args.config.verbosity_scale}};
        report["sic_match_rate"] = match_rate;
        report["code_term_histogram"] = {{"0", hist.zero},
                                         {"1", hist.one},
                                         {"2-5", hist.two_to_five},
                                         {">5", hist.more_than_five}};
        report["richness"] = {{"rich", rich}, {"sparse", sparse}};
        json variants = json::object();
        out << std::left << std::setw(18) << "variant";
        for (int k : args.ks) out << std::setw(9) << ("acc@" + std::to_string(k));
        out << std::setw(12) << "tool-calls" << "\n";
        for (const auto& [variant, variant_records] : records) {
            if (variant_records.empty()) continue;
            json entry;
            json accs = json::object();
            out << std::setw(18) << variant;
            for (int k : args.ks) {
                const double acc = acc_at_k(variant_records, k);
                accs[std::to_string(k)] = acc;
                std::ostringstream cell;
                cell << std::fixed << std::setprecision(3) << acc;
                out << std::setw(9) << cell.str();
            }
            double mean_calls = 0;
            for (const auto& record : variant_records) mean_calls += record.tool_calls;
            mean_calls /= variant_records.size();
            entry["acc"] = std::move(accs);
            entry["mean_tool_calls"] = mean_calls;
            entry["records"] = variant_records.size();
            variants[variant] = std::move(entry);
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(2) << mean_calls;
            out << std::setw(12) << cell.str() << "\n";
        }
        report["variants"] = std::move(variants);

        ensure_dir(args.out_dir);
        const std::string report_path = (fs::path(args.out_dir) / "eval_report.json").string();
        {
            std::ofstream rep(report_path, std::ios::binary);
            if (!rep) throw Error(ErrorCode::IoError, "cannot write '" + report_path + "'");
            rep << report.dump(2) << "\n";
        }
        const std::string sim_path = (fs::path(args.out_dir) / "similarity_report.json").string();
        save_similarity_report(similarity, sim_path);
        if (args.write_csv) {
            const std::string csv_path = (fs::path(args.out_dir) / "eval_report.csv").string();
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw Error(ErrorCode::IoError, "cannot write '" + csv_path + "'");
            csv << "variant";
            for (int k : args.ks) csv << ",acc@" << k;
            csv << ",mean_tool_calls\n";
            for (const auto& [variant, variant_records] : records) {
                if (variant_records.empty()) continue;
                csv << variant;
                for (int k : args.ks) csv << "," << acc_at_k(variant_records, k);
                double mean_calls = 0;
                for (const auto& record : variant_records) mean_calls += record.tool_calls;
                csv << "," << mean_calls / variant_records.size() << "\n";
            }
        }
        out << "wrote " << report_path << " and " << sim_path << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 2;
    }
}

}  // namespace multicolor
