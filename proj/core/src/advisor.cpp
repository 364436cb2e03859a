#include "eco/advisor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <json.hpp>

#include "eco/errors.hpp"
#include "eco/templates.hpp"

namespace eco {

using nlohmann::json;

static const std::set<std::string>& valid_categories() {
    static const std::set<std::string> c = {"InefficientAlgorithm",
                                            "DataStructureUsage", "LibraryUsage",
                                            "LoopStructure"};
    return c;
}

RuleSet RuleSet::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open rule set: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed rule set: " + std::string(e.what()));
    }
    RuleSet rs;
    for (const auto& e : j.value("slow_calls", json::array())) {
        SlowCallEntry s;
        s.name = e.at("name").get<std::string>();
        s.integer_exponent_only = e.value("integer_exponent_only", false);
        rs.slow_calls.push_back(s);
    }
    std::set<std::string> seen;
    for (const auto& e : j.at("rules")) {
        RuleTemplatePair r;
        r.rule_id = e.at("rule_id").get<std::string>();
        r.category = e.at("category").get<std::string>();
        r.detector = e.at("detector").get<std::string>();
        r.template_text = e.at("template").get<std::string>();
        if (!valid_categories().count(r.category))
            throw ConfigError("unknown category: " + r.category);
        if (!seen.insert(r.rule_id).second)
            throw ConfigError("duplicate rule_id: " + r.rule_id);
        rs.rules.push_back(r);
    }
    return rs;
}

const RuleTemplatePair& RuleSet::rule(const std::string& rule_id) const {
    for (const auto& r : rules)
        if (r.rule_id == rule_id) return r;
    throw ConfigError("unknown rule_id: " + rule_id);
}

// ---------------------------------------------------------------------------
// Detectors

std::vector<RuleMatch> detect_recursion_without_memoization(
    const CodePropertyGraph& g) {
    std::vector<RuleMatch> out;
    for (const auto& m : g.methods()) {
        if (m.synthetic) continue;
        if (!g.self_call_methods().count(m.name)) continue;
        auto reads = g.indirect_reads(m.name);
        auto writes = g.indirect_writes(m.name);
        bool has_memo = false;
        for (const auto& id : reads) {
            if (!writes.count(id)) continue;
            // An externally maintained table: read+written indirectly but not
            // declared in the method body itself.
            if (!g.declares(m.name, id)) {
                has_memo = true;
                break;
            }
        }
        if (has_memo) continue;
        RuleMatch match;
        match.entities.push_back({"method", m.name, m.span});
        out.push_back(std::move(match));
    }
    return out;
}

std::vector<RuleMatch> detect_static_replaceable_container(
    const CodePropertyGraph& g) {
    static const std::set<std::string> allowed = {
        "push_back", "operator[]", "size", "at", "front", "back"};
    std::vector<RuleMatch> out;
    for (const auto& d : g.declarations()) {
        if (!d.is_container) continue;
        if (d.type_text.find("vector") == std::string::npos) continue;
        auto ops = g.container_operations(d.name);
        bool static_ok = true;
        int last_line = d.span.end_line;
        for (const auto& [op, span] : ops) {
            if (!allowed.count(op)) {
                static_ok = false;
                break;
            }
            last_line = std::max(last_line, span.end_line);
        }
        if (!static_ok) continue;
        RuleMatch match;
        match.entities.push_back(
            {"variable", d.name, {d.span.start_line, last_line}});
        out.push_back(std::move(match));
    }
    return out;
}

static bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<RuleMatch> detect_slow_library_calls(
    const CodePropertyGraph& g, const std::vector<SlowCallEntry>& table) {
    std::vector<RuleMatch> out;
    for (const auto& c : g.call_sites()) {
        const SlowCallEntry* entry = nullptr;
        for (const auto& e : table)
            if (e.name == c.callee) {
                entry = &e;
                break;
            }
        if (!entry) continue;
        if (entry->integer_exponent_only) {
            if (c.arg_texts.size() < 2 || !is_integer_literal(c.arg_texts[1]))
                continue;
        }
        RuleMatch match;
        match.entities.push_back({"call", c.callee, c.span});
        out.push_back(std::move(match));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.entities[0].span.start_line < b.entities[0].span.start_line;
    });
    return out;
}

std::vector<RuleMatch> detect_loop_invariant_calls(const CodePropertyGraph& g) {
    std::vector<RuleMatch> out;
    for (const auto& loop : g.loop_scopes()) {
        const auto& stmts = loop.body_statements;
        for (size_t si = 0; si < stmts.size(); ++si) {
            for (int cid : stmts[si].call_sites) {
                const CallSite& c = g.calls()[cid];
                bool invariant = true;
                for (const auto& id : c.arg_identifiers)
                    if (loop.mutated.count(id)) {
                        invariant = false;
                        break;
                    }
                if (!invariant) continue;
                // Extend over immediately following declarations whose reads
                // the loop never mutates; they belong to the hoistable region.
                LineSpan span = c.span;
                for (size_t sj = si + 1; sj < stmts.size(); ++sj) {
                    if (!stmts[sj].is_declaration) break;
                    bool clean = true;
                    for (const auto& r : stmts[sj].reads)
                        if (loop.mutated.count(r)) {
                            clean = false;
                            break;
                        }
                    if (!clean) break;
                    span.end_line = std::max(span.end_line, stmts[sj].span.end_line);
                }
                RuleMatch match;
                match.entities.push_back({"call", c.callee, span});
                out.push_back(std::move(match));
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.entities[0].span.start_line < b.entities[0].span.start_line;
    });
    return out;
}

std::vector<RuleMatch> run_rule(const RuleSet& rules, const RuleTemplatePair& r,
                                const CodePropertyGraph& g) {
    std::vector<RuleMatch> matches;
    if (r.detector == "recursion_without_memoization")
        matches = detect_recursion_without_memoization(g);
    else if (r.detector == "static_replaceable_container")
        matches = detect_static_replaceable_container(g);
    else if (r.detector == "slow_library_calls")
        matches = detect_slow_library_calls(g, rules.slow_calls);
    else if (r.detector == "loop_invariant_calls")
        matches = detect_loop_invariant_calls(g);
    else
        throw ConfigError("unknown detector: " + r.detector);
    for (auto& m : matches) m.rule_id = r.rule_id;
    return matches;
}

// ---------------------------------------------------------------------------

static std::string render_entities(const std::vector<MatchEntity>& entities) {
    std::string out;
    for (const auto& e : entities) {
        if (!out.empty()) out += ", ";
        out += "{" + e.kind + ": " + e.name + ", lines: " +
               std::to_string(e.span.start_line) + "--" +
               std::to_string(e.span.end_line) + "}";
    }
    return out;
}

BottleneckDiagnosis instantiate(const RuleTemplatePair& rule,
                                const RuleMatch& m) {
    if (m.entities.empty()) throw Error("rule match has no entities");
    BottleneckDiagnosis d;
    d.rule_id = rule.rule_id;
    d.category = rule.category;
    d.entities = m.entities;
    d.text = substitute(rule.template_text,
                        {{"entities", render_entities(m.entities)}});
    return d;
}

std::vector<BottleneckDiagnosis> advise(const SourceUnit& src,
                                        const RuleSet& rules,
                                        const ParseOptions& opts) {
    CodePropertyGraph g = build_cpg(src, opts);
    std::vector<BottleneckDiagnosis> out;
    for (const auto& r : rules.rules) {
        auto matches = run_rule(rules, r, g);
        if (matches.empty()) continue;
        RuleMatch merged;
        merged.rule_id = r.rule_id;
        for (const auto& m : matches)
            merged.entities.insert(merged.entities.end(), m.entities.begin(),
                                   m.entities.end());
        std::stable_sort(merged.entities.begin(), merged.entities.end(),
                         [](const auto& a, const auto& b) {
                             return a.span.start_line < b.span.start_line;
                         });
        out.push_back(instantiate(r, merged));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
        return a.entities[0].span.start_line < b.entities[0].span.start_line;
    });
    return out;
}

std::map<std::string, int> bottleneck_histogram(
    const std::vector<SourceUnit>& corpus, const RuleSet& rules,
    std::vector<std::string>* skipped) {
    std::map<std::string, int> counts;
    for (const auto& c : valid_categories()) counts[c] = 0;
    for (const auto& src : corpus) {
        try {
            CodePropertyGraph g = build_cpg(src);
            for (const auto& r : rules.rules)
                counts[r.category] += static_cast<int>(run_rule(rules, r, g).size());
        } catch (const ParseError&) {
            if (skipped)
                skipped->push_back(src.path.empty() ? "<memory>" : src.path);
        }
    }
    return counts;
}

bool check_resolved(const std::string& rule_id, const SourceUnit& optimized_src,
                    const RuleSet& rules) {
    CodePropertyGraph g = build_cpg(optimized_src);
    return run_rule(rules, rules.rule(rule_id), g).empty();
}

}  // namespace eco
