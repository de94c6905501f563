#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "multicolor/bm25.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/localize.hpp"
#include "multicolor/sic.hpp"

namespace multicolor {

/// Run-wide tunables; file values are overridden by CLI flags.
struct AppConfig {
    GraphMode mode = GraphMode::Mixed;
    int k = 5;
    int max_results = 5;
    double w_sic = 0.5;
    double w_bm25 = 0.4;
    double w_graph = 0.1;
    Bm25Params bm25;
    double richness_threshold = 0.5;
    int verbosity_scale = 50;
    std::string embedder = "hashed";
    int embedding_dim = 256;
    std::string out_dir = ".";

    LocalizeConfig localize_config() const;
};

/// Parses a JSON config file. Throws Error{BadConfig} on unknown values.
AppConfig load_config(const std::string& path);

/// Instantiates the configured embedder ("hashed" is the only built-in).
std::unique_ptr<Embedder> make_embedder(const AppConfig& config);

struct BuildGraphArgs {
    std::string root;
    GraphMode mode = GraphMode::Mixed;
    std::string out_dir = ".";
};

struct IndexArgs {
    std::string root;
    std::string graph_path;
    std::string issues_path;
    SicMode sic_mode = SicMode::Embed;
    std::string out_dir = ".";
    AppConfig config;
};

struct LocalizeArgs {
    std::string graph_path;
    std::string bm25_path;
    std::string sic_path;
    std::string corpus_path;  // historical issues (cue source)
    std::string issues_path;  // query issues
    std::string variant = "all";
    std::string out_path = "results.jsonl";
    AppConfig config;
};

struct EvaluateArgs {
    std::string results_path;
    std::string issues_path;  // query issues with ground truth
    std::string corpus_path;  // historical issues
    std::string sic_path;
    std::string out_dir = ".";
    std::vector<int> ks = {1, 3, 5};
    bool write_csv = false;
    AppConfig config;
};

// Each command returns a process exit status: 0 on success, 2 on failure
// (message goes to `err`). Artifacts are only written on success paths.
int cmd_build_graph(const BuildGraphArgs& args, std::ostream& out, std::ostream& err);
int cmd_index(const IndexArgs& args, std::ostream& out, std::ostream& err);
int cmd_localize(const LocalizeArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

/// Parses "5", "1,3,5", or "1..10" into a k list.
std::vector<int> parse_k_list(const std::string& spec);

}  // namespace multicolor
