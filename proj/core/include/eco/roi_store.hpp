#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eco/gateway.hpp"
#include "eco/source_unit.hpp"

namespace eco {

struct CodePair {
    std::string pair_id;
    std::string problem_id;
    SourceUnit slow;
    SourceUnit fast;
};

struct RoiPoint {
    std::string description;
    int runtime_improvement = 1;  // 1..10
    std::string category;
};

struct RoiInstruction {
    std::string raw_text;          // post-marker content, verbatim
    std::vector<RoiPoint> points;  // parsed from the embedded JSON array
    bool parse_warning = false;    // set when no clean array was found
};

struct RoiTriplet {
    CodePair pair;
    RoiInstruction instruction;
};

/// In-memory ROI database with line-oriented JSON persistence
/// (one record per line: pair_id, problem_id, slow, fast, roi_raw, points).
class RoiDatabase {
public:
    const std::vector<RoiTriplet>& triplets() const { return triplets_; }
    const std::vector<std::string>& errors() const { return errors_; }

    bool contains(const std::string& pair_id) const;
    void add(RoiTriplet t);  // replaces an existing record with the same pair_id
    void record_error(std::string what) { errors_.push_back(std::move(what)); }
    size_t size() const { return triplets_.size(); }
    bool empty() const { return triplets_.empty(); }

    static RoiDatabase load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::vector<RoiTriplet> triplets_;
    std::vector<std::string> errors_;  // corrupt-line reports from load
};

/// Extract the instruction from a raw model response: keep only content after
/// the last reasoning terminator `marker` (whole text when absent), then parse
/// the last well-formed JSON array of objects carrying "description".
RoiInstruction parse_instruction(const std::string& response,
                                 const std::string& marker = "</think>");

/// Render the distillation prompt for a pair (template placeholders
/// slow_code / fast_code).
std::string make_distill_prompt(const CodePair& pair,
                                const std::string& template_text);

/// Distill one pair through the gateway.
RoiInstruction distill(const CodePair& pair, Gateway& gateway,
                       const std::string& template_text,
                       const std::string& marker = "</think>");

/// Distill all pairs, skipping pair_ids already in `db` (idempotent re-runs).
/// Per-pair failures are recorded on the database, not thrown.
void build_db(RoiDatabase& db, const std::vector<CodePair>& pairs,
              Gateway& gateway, const std::string& template_text,
              const std::string& marker = "</think>");

}  // namespace eco
