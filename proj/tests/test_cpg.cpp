#include <doctest.h>

#include "eco/cpg.hpp"
#include "eco/errors.hpp"
#include "helpers.hpp"

using namespace eco;
using eco_test::fig;

TEST_CASE("count_lines handles edge cases") {
    CHECK(count_lines("") == 0);
    CHECK(count_lines("a") == 1);
    CHECK(count_lines("a\nb") == 2);
    CHECK(count_lines("a\nb\n") == 2);
}

TEST_CASE("fib parses into one method with two self calls") {
    auto g = build_cpg(fig("fig3_slow"));
    REQUIRE(g.has_method("fib"));
    const auto& m = g.method("fib");
    CHECK(m.span == LineSpan{1, 4});
    CHECK(m.parameters == std::vector<std::string>{"n"});
    CHECK(g.self_call_methods() == std::set<std::string>{"fib"});
    int self_calls = 0;
    for (const auto& c : g.calls())
        if (c.resolved && c.callee_method == c.caller) ++self_calls;
    CHECK(self_calls == 2);
}

TEST_CASE("memoized fib reads and writes dp indirectly") {
    auto g = build_cpg(fig("fig3_fast"));
    CHECK(g.self_call_methods().count("fib") == 1);
    CHECK(g.indirect_reads("fib").count("dp") == 1);
    CHECK(g.indirect_writes("fib").count("dp") == 1);
    CHECK(g.declares("fib", "dp") == false);
    CHECK(g.declared_at_file_scope("dp") == true);
}

TEST_CASE("parameters do not count as body declarations") {
    auto g = build_cpg(SourceUnit::from_text(
        "int f(int a){\n    int b = a;\n    return b;\n}\n"));
    CHECK(g.declares("f", "b") == true);
    CHECK(g.declares("f", "a") == false);
}

TEST_CASE("method lookup throws for unknown names") {
    auto g = build_cpg(fig("fig3_slow"));
    CHECK_THROWS_AS(g.method("nope"), UnknownMethod);
    CHECK(g.has_method("nope") == false);
}

TEST_CASE("vector fixture yields container declaration and operations") {
    auto g = build_cpg(fig("fig4_slow"));
    bool found = false;
    for (const auto& d : g.declarations())
        if (d.name == "v") {
            found = true;
            CHECK(d.is_container);
            CHECK(d.span.start_line == 2);
        }
    CHECK(found);
    auto ops = g.container_operations("v");
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].first == "push_back");
    CHECK(ops[0].second == LineSpan{4, 4});
    CHECK_THROWS_AS(g.container_operations("missing"), UnknownIdentifier);
}

TEST_CASE("subscripted container reports operator[]") {
    auto g = build_cpg(SourceUnit::from_text(
        "std::vector<int> v;\nint x = v[0];\nv.push_back(1);\n"));
    auto ops = g.container_operations("v");
    REQUIRE(ops.size() == 2);
    CHECK(ops[0].first == "operator[]");
    CHECK(ops[1].first == "push_back");
}

TEST_CASE("stream statements become one call site each") {
    auto g = build_cpg(fig("fig5_slow"));
    auto calls = g.call_sites({"cin", "cout"});
    REQUIRE(calls.size() == 2);
    CHECK(calls[0].callee == "cin");
    CHECK(calls[0].span == LineSpan{2, 2});
    CHECK(calls[0].arg_identifiers == std::vector<std::string>{"x", "y"});
    CHECK(calls[1].callee == "cout");
    CHECK(calls[1].span == LineSpan{4, 4});
    // endl is stream plumbing, never its own call site
    CHECK(g.call_sites({"endl"}).empty());
}

TEST_CASE("cin extraction writes its targets") {
    auto g = build_cpg(fig("fig5_slow"));
    int writes = 0;
    for (const auto& u : g.identifiers())
        if (u.kind == UseKind::Write && (u.name == "x" || u.name == "y") &&
            u.span.start_line == 2)
            ++writes;
    CHECK(writes == 2);
}

TEST_CASE("loop scopes track mutation sets and body statements") {
    auto g = build_cpg(fig("fig6_slow"));
    REQUIRE(g.loop_scopes().size() == 1);
    const auto& loop = g.loop_scopes()[0];
    CHECK(loop.mutated.count("i") == 1);
    CHECK(loop.mutated.count("res") == 1);
    CHECK(loop.mutated.count("min_v") == 1);
    CHECK(loop.mutated.count("a") == 0);
    CHECK(loop.mutated.count("n") == 0);
    REQUIRE(loop.body_statements.size() == 3);
    CHECK(loop.body_statements[0].call_sites.size() == 1);
    CHECK(loop.body_statements[1].is_declaration);
    CHECK(loop.body_statements[1].reads == std::set<std::string>{"a"});
}

TEST_CASE("nested loops nest and propagate mutations outward") {
    auto g = build_cpg(SourceUnit::from_text(
        "int s = 0;\n"
        "for(int i=0;i<n;++i) {\n"
        "  for(int j=0;j<n;++j) {\n"
        "    s += f(i, j);\n"
        "  }\n"
        "}\n"));
    REQUIRE(g.loop_scopes().size() == 2);
    CHECK(g.loop_scopes()[1].parent == 0);
    CHECK(g.loop_scopes()[0].mutated.count("j") == 1);
    CHECK(g.loop_scopes()[0].call_sites.size() == 1);
    CHECK(g.loop_scopes()[1].call_sites.size() == 1);
}

TEST_CASE("address-taken identifiers count as mutated") {
    auto g = build_cpg(SourceUnit::from_text(
        "while (q--) {\n  scanf(\"%d\", &x);\n  use(x);\n}\n"));
    REQUIRE(g.loop_scopes().size() == 1);
    CHECK(g.loop_scopes()[0].mutated.count("x") == 1);
}

TEST_CASE("top-level executable statements get an implicit scope") {
    auto g = build_cpg(fig("fig4_slow"));
    REQUIRE(g.has_method("<toplevel>"));
    CHECK(g.method("<toplevel>").synthetic);
    // Pure declarations keep file scope.
    auto g2 = build_cpg(SourceUnit::from_text("int a;\nint b = 3;\n"));
    CHECK(!g2.has_method("<toplevel>"));
    CHECK(g2.declared_at_file_scope("a"));
    CHECK(g2.declared_at_file_scope("b"));
}

TEST_CASE("preprocessor lines and comments are skipped") {
    auto g = build_cpg(SourceUnit::from_text(
        "#include <vector>\n"
        "// int ghost(int);\n"
        "/* f(); */\n"
        "int twice(int v){ return v * 2; }\n"));
    CHECK(g.has_method("twice"));
    CHECK(g.calls().empty());
}

TEST_CASE("strict mode throws on unbalanced input, lenient warns") {
    SourceUnit broken = SourceUnit::from_text("int f(){ return 1;\n");
    ParseOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(build_cpg(broken, strict), ParseError);
    auto g = build_cpg(broken);
    CHECK(!g.warnings().empty());
}

TEST_CASE("empty source is a parse error") {
    CHECK_THROWS_AS(build_cpg(SourceUnit::from_text("")), ParseError);
}

TEST_CASE("struct bodies are skipped with a warning") {
    auto g = build_cpg(SourceUnit::from_text(
        "struct P { int x; int y; };\nint f(){ return 0; }\n"));
    CHECK(g.has_method("f"));
    CHECK(!g.warnings().empty());
}

TEST_CASE("call graph resolution is deterministic across rebuilds") {
    auto a = build_cpg(fig("fig6_slow"));
    auto b = build_cpg(fig("fig6_slow"));
    std::ostringstream da, db;
    a.dump(da);
    b.dump(db);
    CHECK(da.str() == db.str());
}
