#include "multicolor/embed.hpp"

#include <cctype>
#include <cmath>

#include "multicolor/tokenize.hpp"

namespace multicolor {

namespace {

uint64_t fnv1a(std::string_view data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string HashedEmbedder::fingerprint() const {
    return "hashed-bow-fnv1a-d" + std::to_string(dimension_) + "-v1";
}

std::vector<double> HashedEmbedder::embed(std::string_view text) const {
    std::vector<double> v(dimension_, 0.0);
    for (const auto& token : tokenize_identifiers(text)) {
        v[fnv1a(token) % static_cast<uint64_t>(dimension_)] += 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm == 0.0) {
        v[0] = 1.0;  // canonical unit vector for empty text
        return v;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

std::string NormalizingSummarizer::normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    const size_t n = text.size();
    auto is_hex = [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f') ||
               (c >= 'A' && c <= 'F');
    };
    while (i < n) {
        // hex addresses: 0x....
        if (text[i] == '0' && i + 2 < n && (text[i + 1] == 'x' || text[i + 1] == 'X') &&
            is_hex(text[i + 2])) {
            size_t j = i + 2;
            while (j < n && is_hex(text[j])) ++j;
            i = j;
            continue;
        }
        // long digit runs (5+) read like ids/timestamps; drop them
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j - i >= 5) {
                i = j;
                continue;
            }
        }
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            if (!out.empty() && out.back() != ' ') out.push_back(' ');
            ++i;
            continue;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string NormalizingSummarizer::summarize(const Issue& issue) const {
    std::string joined = issue.title + "\n" + issue.description;
    if (issue.root_cause) joined += "\n" + *issue.root_cause;
    if (issue.feature_summary) joined += "\n" + *issue.feature_summary;
    if (issue.root_cause_category) joined += "\n" + *issue.root_cause_category;
    if (issue.product_family) joined += "\n" + *issue.product_family;
    if (issue.product_name) joined += "\n" + *issue.product_name;
    if (issue.priority) joined += "\npriority " + std::to_string(*issue.priority);
    if (issue.severity) joined += "\nseverity " + std::to_string(*issue.severity);
    return normalize(joined);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    return dot;
}

}  // namespace multicolor
