#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "multicolor/issue.hpp"

namespace multicolor {

/// Deterministic text embedder contract: identical text must yield an
/// identical unit-norm vector of a fixed dimension.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual int dimension() const = 0;
    virtual std::string fingerprint() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Offline default: hashed bag of identifier subtokens. Tokens are hashed
/// with FNV-1a 64 into a fixed number of buckets, term-frequency weighted,
/// then L2-normalized. A hosted embedding model can be swapped in behind
/// the same contract.
class HashedEmbedder : public Embedder {
public:
    explicit HashedEmbedder(int dimension = 256) : dimension_(dimension) {}

    int dimension() const override { return dimension_; }
    std::string fingerprint() const override;
    std::vector<double> embed(std::string_view text) const override;

private:
    int dimension_;
};

/// Issue summarizer contract; the fallback is deterministic normalization.
class Summarizer {
public:
    virtual ~Summarizer() = default;
    virtual std::string summarize(const Issue& issue) const = 0;
};

/// Lowercases, strips hex addresses and long digit runs, collapses
/// whitespace, and concatenates fields in a fixed order: title,
/// description, root cause, feature summary, then remaining metadata.
class NormalizingSummarizer : public Summarizer {
public:
    std::string summarize(const Issue& issue) const override;

    /// The normalization step alone, exposed for testing.
    static std::string normalize(std::string_view text);
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace multicolor
