#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eco/gateway.hpp"
#include "eco/roi_store.hpp"
#include "eco/source_unit.hpp"
#include "eco/templates.hpp"

namespace eco {

/// Deterministic lexical embedder: hashed lowercase word and character
/// trigram features, TF-IDF weighted, folded into a fixed dimension and
/// unit-normalized. All feature weights are non-negative, so cosine
/// similarity of embeddings lies in [0, 1].
class Embedder {
public:
    explicit Embedder(int dim = 512);

    void fit_idf(const std::vector<std::string>& corpus);
    std::vector<double> embed(const std::string& text) const;
    int dim() const { return dim_; }

    /// Raw feature strings of a text ("w:" words, "g:" trigrams).
    static std::vector<std::string> features(const std::string& text);

    std::string serialize() const;
    static Embedder deserialize(const std::string& data);

private:
    int dim_;
    size_t n_docs_ = 0;
    std::map<std::string, size_t> df_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

struct PerformanceAnalysis {
    std::string text;
    std::string source_id;
};

struct ScoredTriplet {
    size_t index;  // position in the database's triplet list
    double score;
};

enum class IndexSource { Instruction, SlowCode };

/// Brute-force cosine index over an ROI database.
class RetrievalIndex {
public:
    static RetrievalIndex build(const RoiDatabase& db, int dim = 512,
                                IndexSource source = IndexSource::Instruction);

    /// Top-k by cosine similarity; ties keep database insertion order.
    std::vector<ScoredTriplet> retrieve(const std::string& query_text,
                                        int k) const;  // throws EmptyDatabase

    const Embedder& embedder() const { return embedder_; }
    size_t size() const { return vectors_.size(); }

    void save(const std::filesystem::path& path) const;
    static RetrievalIndex load(const std::filesystem::path& path);

private:
    Embedder embedder_{512};
    IndexSource source_ = IndexSource::Instruction;
    std::vector<std::vector<double>> vectors_;
};

/// Render the performance-analysis prompt for a source (placeholder src_code).
std::string make_analysis_prompt(const SourceUnit& src,
                                 const std::string& template_text);

/// Ask the gateway for a bottleneck analysis of the source.
PerformanceAnalysis analyze_performance(const SourceUnit& src, Gateway& gateway,
                                        const std::string& template_text);

/// Tokens present in both the input and at least one retrieved source,
/// ranked by mean TF-IDF weight over the whole document set, descending.
std::vector<std::pair<std::string, double>> keyword_overlap_report(
    const SourceUnit& input, const std::vector<SourceUnit>& retrieved,
    int n_top);

}  // namespace eco
