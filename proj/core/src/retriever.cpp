#include "eco/retriever.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eco/errors.hpp"

namespace eco {

using ordered_json = nlohmann::ordered_json;

Embedder::Embedder(int dim) : dim_(dim) {
    if (dim <= 0) throw ConfigError("embedding dimension must be positive");
}

static std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> Embedder::features(const std::string& text) {
    std::vector<std::string> out;
    std::string low = lowercase(text);
    // Word features: maximal alphanumeric runs.
    size_t i = 0;
    while (i < low.size()) {
        if (std::isalnum(static_cast<unsigned char>(low[i])) || low[i] == '_') {
            size_t j = i;
            while (j < low.size() &&
                   (std::isalnum(static_cast<unsigned char>(low[j])) ||
                    low[j] == '_'))
                ++j;
            out.push_back("w:" + low.substr(i, j - i));
            i = j;
        } else {
            ++i;
        }
    }
    // Trigram features over the whitespace-collapsed text.
    std::string collapsed;
    bool prev_space = false;
    for (char c : low) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!prev_space && !collapsed.empty()) collapsed += ' ';
            prev_space = true;
        } else {
            collapsed += c;
            prev_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    for (size_t k = 0; k + 3 <= collapsed.size(); ++k)
        out.push_back("g:" + collapsed.substr(k, 3));
    return out;
}

void Embedder::fit_idf(const std::vector<std::string>& corpus) {
    df_.clear();
    n_docs_ = corpus.size();
    for (const auto& doc : corpus) {
        std::set<std::string> uniq;
        for (auto& f : features(doc)) uniq.insert(std::move(f));
        for (const auto& f : uniq) ++df_[f];
    }
}

static std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<double> Embedder::embed(const std::string& text) const {
    std::vector<double> v(dim_, 0.0);
    std::map<std::string, int> tf;
    for (const auto& f : features(text)) ++tf[f];
    if (tf.empty()) return v;
    for (const auto& [f, count] : tf) {
        auto it = df_.find(f);
        size_t df = it == df_.end() ? 0 : it->second;
        double idf = std::log((1.0 + n_docs_) / (1.0 + df)) + 1.0;
        v[fnv1a(f) % dim_] += count * idf;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return v;
}

std::string Embedder::serialize() const {
    ordered_json df = ordered_json::object();
    for (const auto& [f, c] : df_) df[f] = c;
    return ordered_json{{"dim", dim_}, {"n_docs", n_docs_}, {"df", df}}.dump();
}

Embedder Embedder::deserialize(const std::string& data) {
    ordered_json j = ordered_json::parse(data);
    Embedder e(j.at("dim").get<int>());
    e.n_docs_ = j.at("n_docs").get<size_t>();
    for (const auto& [f, c] : j.at("df").items())
        e.df_[f] = c.get<size_t>();
    return e;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------

static std::string index_text(const RoiTriplet& t, IndexSource source) {
    return source == IndexSource::Instruction ? t.instruction.raw_text
                                              : t.pair.slow.text;
}

RetrievalIndex RetrievalIndex::build(const RoiDatabase& db, int dim,
                                     IndexSource source) {
    RetrievalIndex idx;
    idx.embedder_ = Embedder(dim);
    idx.source_ = source;
    std::vector<std::string> corpus;
    for (const auto& t : db.triplets()) corpus.push_back(index_text(t, source));
    idx.embedder_.fit_idf(corpus);
    for (const auto& text : corpus)
        idx.vectors_.push_back(idx.embedder_.embed(text));
    return idx;
}

std::vector<ScoredTriplet> RetrievalIndex::retrieve(
    const std::string& query_text, int k) const {
    if (vectors_.empty()) throw EmptyDatabase();
    if (k < 1) throw Error("k must be at least 1");
    std::vector<double> q = embedder_.embed(query_text);
    std::vector<ScoredTriplet> scored;
    for (size_t i = 0; i < vectors_.size(); ++i)
        scored.push_back({i, cosine(q, vectors_[i])});
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredTriplet& a, const ScoredTriplet& b) {
                         return a.score > b.score;
                     });
    scored.resize(std::min<size_t>(k, scored.size()));
    return scored;
}

void RetrievalIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index: " + path.string());
    ordered_json j = {{"source", source_ == IndexSource::Instruction
                                     ? "instruction"
                                     : "slow_code"},
                      {"embedder", ordered_json::parse(embedder_.serialize())},
                      {"vectors", vectors_}};
    out << j.dump() << "\n";
}

RetrievalIndex RetrievalIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index: " + path.string());
    ordered_json j;
    in >> j;
    RetrievalIndex idx;
    idx.source_ = j.at("source").get<std::string>() == "instruction"
                      ? IndexSource::Instruction
                      : IndexSource::SlowCode;
    idx.embedder_ = Embedder::deserialize(j.at("embedder").dump());
    idx.vectors_ = j.at("vectors").get<std::vector<std::vector<double>>>();
    return idx;
}

// ---------------------------------------------------------------------------

static std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

std::string make_analysis_prompt(const SourceUnit& src,
                                 const std::string& template_text) {
    if (src.text.empty()) throw Error("source is empty");
    return substitute(template_text,
                      {{"src_code", strip_trailing_newlines(src.text)}});
}

PerformanceAnalysis analyze_performance(const SourceUnit& src, Gateway& gateway,
                                        const std::string& template_text) {
    PerformanceAnalysis out;
    out.source_id = src.path;
    out.text = gateway.complete(make_analysis_prompt(src, template_text)).text;
    return out;
}

std::vector<std::pair<std::string, double>> keyword_overlap_report(
    const SourceUnit& input, const std::vector<SourceUnit>& retrieved,
    int n_top) {
    auto words = [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& f : Embedder::features(text))
            if (f.rfind("w:", 0) == 0) out.push_back(f.substr(2));
        return out;
    };

    std::vector<std::vector<std::string>> docs;
    docs.push_back(words(input.text));
    for (const auto& r : retrieved) docs.push_back(words(r.text));
    size_t n = docs.size();

    std::map<std::string, size_t> df;
    for (const auto& d : docs) {
        std::set<std::string> uniq(d.begin(), d.end());
        for (const auto& w : uniq) ++df[w];
    }

    std::set<std::string> in_input(docs[0].begin(), docs[0].end());
    std::set<std::string> in_retrieved;
    for (size_t i = 1; i < n; ++i)
        in_retrieved.insert(docs[i].begin(), docs[i].end());

    std::vector<std::pair<std::string, double>> report;
    for (const auto& w : in_input) {
        if (!in_retrieved.count(w)) continue;
        double idf = std::log((1.0 + n) / (1.0 + df[w])) + 1.0;
        double mean_weight = 0.0;
        for (const auto& d : docs) {
            if (d.empty()) continue;
            double tf = static_cast<double>(std::count(d.begin(), d.end(), w)) /
                        d.size();
            mean_weight += tf * idf;
        }
        mean_weight /= n;
        report.push_back({w, mean_weight});
    }
    std::sort(report.begin(), report.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (n_top >= 0 && report.size() > static_cast<size_t>(n_top))
        report.resize(n_top);
    return report;
}

}  // namespace eco
