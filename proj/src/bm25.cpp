#include "multicolor/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/tokenize.hpp"

namespace multicolor {

using nlohmann::json;

Bm25Index build_bm25(const std::vector<IndexableUnit>& units, Bm25Params params) {
    Bm25Index idx;
    idx.params = params;
    long long total_tokens = 0;
    for (const auto& unit : units) {
        if (idx.units.count(unit.unit_id)) {
            throw Error(ErrorCode::DuplicateUnit, "unit '" + unit.unit_id + "' indexed twice");
        }
        Bm25Index::UnitInfo info;
        info.file = unit.file.str();
        info.kind = unit.kind;
        info.length = static_cast<int>(unit.tokens.size());
        idx.units.emplace(unit.unit_id, info);
        total_tokens += info.length;

        std::map<std::string, int> tf;
        for (const auto& token : unit.tokens) ++tf[token];
        for (const auto& [term, count] : tf) {
            idx.postings[term].emplace_back(unit.unit_id, count);
        }
    }
    for (auto& [term, list] : idx.postings) {
        std::sort(list.begin(), list.end());
    }
    idx.avg_doc_length =
        idx.units.empty() ? 0.0 : static_cast<double>(total_tokens) / idx.units.size();
    return idx;
}

namespace {

bool in_scope(const std::string& file, const std::vector<std::string>* scope) {
    if (!scope) return true;
    for (const auto& prefix : *scope) {
        if (path_has_prefix(file, prefix)) return true;
    }
    return false;
}

// Non-negative Okapi idf: log(1 + (N - df + 0.5) / (df + 0.5)).
double idf(size_t n_docs, size_t df) {
    return std::log(1.0 + (static_cast<double>(n_docs) - static_cast<double>(df) + 0.5) /
                              (static_cast<double>(df) + 0.5));
}

}  // namespace

std::vector<std::pair<std::string, double>> query_bm25(
    const Bm25Index& idx, const std::vector<std::string>& query, int top_n,
    const std::vector<std::string>* scope) {
    std::vector<std::pair<std::string, double>> out;
    if (query.empty() || top_n < 1 || idx.units.empty()) return out;

    std::map<std::string, int> query_tf;
    for (const auto& token : query) ++query_tf[token];

    const size_t n_docs = idx.doc_count();
    std::map<std::string, double> scores;
    for (const auto& [term, qtf] : query_tf) {
        auto it = idx.postings.find(term);
        if (it == idx.postings.end()) continue;
        const double term_idf = idf(n_docs, it->second.size());
        for (const auto& [unit_id, tf] : it->second) {
            const auto& info = idx.units.at(unit_id);
            if (!in_scope(info.file, scope)) continue;
            const double norm =
                1.0 - idx.params.b +
                idx.params.b * (idx.avg_doc_length > 0.0 ? info.length / idx.avg_doc_length : 0.0);
            const double tf_part = (tf * (idx.params.k1 + 1.0)) / (tf + idx.params.k1 * norm);
            scores[unit_id] += qtf * term_idf * tf_part;
        }
    }
    out.assign(scores.begin(), scores.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (out.size() > static_cast<size_t>(top_n)) out.resize(top_n);
    return out;
}

std::vector<std::pair<std::string, double>> rank_files(
    const Bm25Index& idx, const std::vector<std::string>& query, int top_n,
    const std::vector<std::string>* scope) {
    // Score every in-scope unit, then keep each file's best unit score.
    auto unit_hits = query_bm25(idx, query, static_cast<int>(idx.units.size()) + 1, scope);
    std::map<std::string, double> per_file;
    for (const auto& [unit_id, score] : unit_hits) {
        const auto& file = idx.units.at(unit_id).file;
        auto [it, inserted] = per_file.emplace(file, score);
        if (!inserted) it->second = std::max(it->second, score);
    }
    std::vector<std::pair<std::string, double>> out(per_file.begin(), per_file.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (top_n >= 1 && out.size() > static_cast<size_t>(top_n)) out.resize(top_n);
    return out;
}

std::vector<IndexableUnit> collect_indexable_units(
    const DependencyGraph& g,
    const std::function<std::optional<std::string>(const std::string&)>& load_file) {
    std::vector<IndexableUnit> units;
    std::map<std::string, std::vector<std::string>> file_lines;

    auto lines_of = [&](const std::string& path) -> const std::vector<std::string>* {
        auto it = file_lines.find(path);
        if (it != file_lines.end()) return &it->second;
        auto text = load_file(path);
        if (!text) return nullptr;
        std::vector<std::string> lines;
        std::string current;
        for (char c : *text) {
            if (c == '\n') {
                lines.push_back(std::move(current));
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        lines.push_back(std::move(current));
        return &file_lines.emplace(path, std::move(lines)).first->second;
    };

    auto mode_accepts = [&](Language lang) {
        switch (g.mode) {
            case GraphMode::PythonOnly: return lang == Language::Python;
            case GraphMode::CppOnly: return lang == Language::Cpp;
            case GraphMode::QmlOnly: return lang == Language::Qml;
            case GraphMode::Mixed: return lang != Language::Other;
        }
        return false;
    };

    for (const auto& [id, node] : g.nodes) {
        if (node.kind == EntityKind::Directory) continue;
        if (node.kind == EntityKind::File) {
            if (!mode_accepts(node.language)) continue;
            auto text = load_file(node.path);
            if (!text) continue;
            IndexableUnit unit;
            unit.unit_id = id;
            unit.file = parse_repo_path(node.path);
            unit.kind = EntityKind::File;
            unit.tokens = tokenize_identifiers(*text);
            units.push_back(std::move(unit));
            continue;
        }
        // entity spans
        const auto* lines = lines_of(node.path);
        if (!lines) continue;
        int start = 1, end = 1;
        if (auto it = node.attrs.find("start_line"); it != node.attrs.end())
            start = std::stoi(it->second);
        if (auto it = node.attrs.find("end_line"); it != node.attrs.end())
            end = std::stoi(it->second);
        start = std::max(1, start);
        end = std::min(static_cast<int>(lines->size()), std::max(start, end));
        std::string text;
        for (int i = start; i <= end; ++i) {
            text += (*lines)[i - 1];
            text += '\n';
        }
        IndexableUnit unit;
        unit.unit_id = id;
        unit.file = parse_repo_path(node.path);
        unit.kind = node.kind;
        unit.tokens = tokenize_identifiers(text);
        units.push_back(std::move(unit));
    }
    return units;
}

std::string bm25_to_json(const Bm25Index& idx) {
    json doc;
    doc["params"] = {{"k1", idx.params.k1}, {"b", idx.params.b}};
    doc["graph_snapshot"] = idx.graph_snapshot;
    doc["avg_doc_length"] = idx.avg_doc_length;
    doc["N"] = idx.doc_count();
    json units = json::object();
    for (const auto& [id, info] : idx.units) {
        units[id] = {{"file", info.file}, {"kind", to_string(info.kind)}, {"length", info.length}};
    }
    doc["units"] = std::move(units);
    json postings = json::object();
    for (const auto& [term, list] : idx.postings) {
        auto arr = json::array();
        for (const auto& [unit_id, tf] : list) arr.push_back({unit_id, tf});
        postings[term] = std::move(arr);
    }
    doc["postings"] = std::move(postings);
    return doc.dump(2) + "\n";
}

Bm25Index bm25_from_json(const std::string& text) {
    json doc = json::parse(text);
    Bm25Index idx;
    idx.params.k1 = doc.at("params").at("k1").get<double>();
    idx.params.b = doc.at("params").at("b").get<double>();
    idx.graph_snapshot = doc.value("graph_snapshot", "");
    idx.avg_doc_length = doc.at("avg_doc_length").get<double>();
    for (const auto& [id, info] : doc.at("units").items()) {
        Bm25Index::UnitInfo u;
        u.file = info.at("file").get<std::string>();
        u.kind = entity_kind_from_string(info.at("kind").get<std::string>());
        u.length = info.at("length").get<int>();
        idx.units.emplace(id, u);
    }
    for (const auto& [term, list] : doc.at("postings").items()) {
        auto& postings = idx.postings[term];
        for (const auto& entry : list) {
            postings.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<int>());
        }
    }
    return idx;
}

void save_bm25(const Bm25Index& idx, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << bm25_to_json(idx);
}

Bm25Index load_bm25(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return bm25_from_json(buf.str());
}

}  // namespace multicolor
