#pragma once

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "eco/source_unit.hpp"

namespace eco {

struct LineSpan {
    int start_line = 1;
    int end_line = 1;

    bool operator==(const LineSpan&) const = default;
};

enum class UseKind { Read, Write };
enum class Directness { Direct, Indirect };

struct MethodNode {
    int id = -1;
    std::string name;
    LineSpan span;
    std::vector<std::string> parameters;
    bool synthetic = false;  // true for the implicit top-level scope
};

struct CallSite {
    int id = -1;
    std::string callee;           // unqualified name (std::sort -> "sort")
    int caller = -1;              // MethodNode id
    bool resolved = false;        // callee found in this translation unit
    int callee_method = -1;       // valid when resolved
    bool member_call = false;
    std::string receiver;         // base variable for member calls
    LineSpan span;
    std::vector<std::string> arg_texts;       // raw argument text, one per argument
    std::vector<std::string> arg_identifiers; // identifiers occurring in arguments
};

struct IdentifierUse {
    std::string name;
    UseKind kind = UseKind::Read;
    Directness directness = Directness::Direct;
    int method = -1;  // enclosing MethodNode id
    LineSpan span;
};

struct Declaration {
    std::string name;
    int method = -1;  // -1 for file scope
    bool is_container = false;
    std::string type_text;
    LineSpan span;
};

/// One directly nested statement of a loop body, kept for invariance checks.
struct LoopStatement {
    LineSpan span;
    bool is_declaration = false;
    std::vector<int> call_sites;   // CallSite ids started in this statement
    std::set<std::string> reads;   // identifiers the statement reads
};

struct LoopScope {
    int id = -1;
    int parent = -1;  // enclosing LoopScope id, -1 for outermost
    int method = -1;
    LineSpan span;
    std::vector<int> call_sites;      // all call sites anywhere inside the loop
    std::set<std::string> mutated;    // identifiers written by the loop's own statements
    std::vector<LoopStatement> body_statements;
};

struct GraphEdge {
    std::string kind;  // "contains" | "calls" | "defuse"
    std::string from;
    std::string to;
};

struct ParseOptions {
    bool strict = false;  // strict: throw ParseError; lenient: skip + warn
};

/// Immutable once built. All queries are const and deterministic.
class CodePropertyGraph {
public:
    const std::vector<MethodNode>& methods() const { return methods_; }
    const std::vector<CallSite>& calls() const { return calls_; }
    const std::vector<IdentifierUse>& identifiers() const { return identifiers_; }
    const std::vector<LoopScope>& loops() const { return loops_; }
    const std::vector<Declaration>& declarations() const { return declarations_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    int line_count() const { return line_count_; }

    const MethodNode& method(const std::string& name) const;  // throws UnknownMethod
    bool has_method(const std::string& name) const;

    /// Methods containing at least one call site resolving to themselves.
    std::set<std::string> self_call_methods() const;

    /// Names used with subscript/deref/member access as reads inside `method_name`.
    std::set<std::string> indirect_reads(const std::string& method_name) const;
    std::set<std::string> indirect_writes(const std::string& method_name) const;

    /// True iff the method's body (not its parameter list) declares `id`.
    bool declares(const std::string& method_name, const std::string& id) const;

    bool declared_at_file_scope(const std::string& id) const;

    /// All call sites whose callee name is in `name_filter`; empty filter = all.
    std::vector<CallSite> call_sites(const std::set<std::string>& name_filter = {}) const;

    const std::vector<LoopScope>& loop_scopes() const { return loops_; }

    /// Member operations on `var` in source order, as (operation, span).
    /// Subscripting a container counts as "operator[]".
    std::vector<std::pair<std::string, LineSpan>> container_operations(
        const std::string& var) const;  // throws UnknownIdentifier

    /// Line-delimited record dump (one node/edge per line) for debugging.
    void dump(std::ostream& out) const;

private:
    friend class CpgBuilder;
    std::vector<MethodNode> methods_;
    std::vector<CallSite> calls_;
    std::vector<IdentifierUse> identifiers_;
    std::vector<LoopScope> loops_;
    std::vector<Declaration> declarations_;
    std::vector<GraphEdge> edges_;
    std::vector<std::string> warnings_;
    std::vector<std::pair<std::string, LineSpan>> subscripts_;  // var[..] events
    int line_count_ = 0;
};

/// Parse a single-file C++ source into a CPG. Pure and deterministic.
CodePropertyGraph build_cpg(const SourceUnit& src, const ParseOptions& opts = {});

}  // namespace eco
