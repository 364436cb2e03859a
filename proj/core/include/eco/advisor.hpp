#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eco/cpg.hpp"
#include "eco/source_unit.hpp"

namespace eco {

struct SlowCallEntry {
    std::string name;
    bool integer_exponent_only = false;  // pow-style: flag only literal int exponents
};

struct RuleTemplatePair {
    std::string rule_id;
    std::string category;  // InefficientAlgorithm | DataStructureUsage |
                           // LibraryUsage | LoopStructure
    std::string detector;  // built-in detector bound by name
    std::string template_text;
};

struct MatchEntity {
    std::string kind;  // "method" | "variable" | "call"
    std::string name;
    LineSpan span;
};

struct RuleMatch {
    std::string rule_id;
    std::vector<MatchEntity> entities;
};

struct BottleneckDiagnosis {
    std::string rule_id;
    std::string category;
    std::string text;
    std::vector<MatchEntity> entities;
};

/// Rule-template pairs plus the slow-call table, loaded from one config file.
struct RuleSet {
    std::vector<RuleTemplatePair> rules;
    std::vector<SlowCallEntry> slow_calls;

    static RuleSet load(const std::filesystem::path& file);  // throws ConfigError
    const RuleTemplatePair& rule(const std::string& rule_id) const;
};

std::vector<RuleMatch> detect_recursion_without_memoization(
    const CodePropertyGraph& g);
std::vector<RuleMatch> detect_static_replaceable_container(
    const CodePropertyGraph& g);
std::vector<RuleMatch> detect_slow_library_calls(
    const CodePropertyGraph& g, const std::vector<SlowCallEntry>& table);
std::vector<RuleMatch> detect_loop_invariant_calls(const CodePropertyGraph& g);

/// Run one rule of the set against a prebuilt graph.
std::vector<RuleMatch> run_rule(const RuleSet& rules, const RuleTemplatePair& r,
                                const CodePropertyGraph& g);

/// Substitute the match entities into the rule template.
/// Entities render as `{kind: name, lines: S--E}` joined by ", ".
BottleneckDiagnosis instantiate(const RuleTemplatePair& rule, const RuleMatch& m);

/// Full pipeline: build the graph, run every rule, merge each rule's matches
/// into one diagnosis, order by (rule_id, first entity line).
std::vector<BottleneckDiagnosis> advise(const SourceUnit& src,
                                        const RuleSet& rules,
                                        const ParseOptions& opts = {});

/// Per-category raw match counts over a corpus; unparseable units are skipped
/// and their identifiers appended to `skipped` when given.
std::map<std::string, int> bottleneck_histogram(
    const std::vector<SourceUnit>& corpus, const RuleSet& rules,
    std::vector<std::string>* skipped = nullptr);

/// True iff re-running the named rule on `optimized_src` yields no match.
bool check_resolved(const std::string& rule_id, const SourceUnit& optimized_src,
                    const RuleSet& rules);

}  // namespace eco
