#include <doctest.h>

#include "eco/advisor.hpp"
#include "eco/errors.hpp"
#include "helpers.hpp"

using namespace eco;
using eco_test::fig;

static const RuleSet& rules() {
    static RuleSet rs = RuleSet::load(eco_test::asset_dir() / "rules.json");
    return rs;
}

static const char* kFibDiagnosis =
    "The following methods are purely recursive: [{method: fib, lines: 1--4}]. "
    "Applying memoization or dynamic programming can significantly reduce its "
    "execution time.";
static const char* kVectorDiagnosis =
    "The following vectors do not use dynamic operations: [{variable: v, "
    "lines: 2--4}]. Replacing them with a static array or fixed-size container "
    "can improve performance.";
static const char* kIoDiagnosis =
    "The following I/O library calls rely on slow operations: [{call: cin, "
    "lines: 2--2}, {call: cout, lines: 4--4}]. Replacing them with faster "
    "alternatives (scanf, printf) can improve performance.";
static const char* kLoopDiagnosis =
    "The following redundant calls are placed inside loops: [{call: sort, "
    "lines: 3--4}]. Moving these calls outside the loop, or caching their "
    "results, can eliminate redundant work and improve efficiency.";

TEST_CASE("slow fixtures yield exactly their diagnosis") {
    auto check_one = [](const char* name, const char* expected) {
        auto diagnoses = advise(fig(name), rules());
        REQUIRE(diagnoses.size() == 1);
        CHECK(diagnoses[0].text == expected);
    };
    check_one("fig3_slow", kFibDiagnosis);
    check_one("fig4_slow", kVectorDiagnosis);
    check_one("fig5_slow", kIoDiagnosis);
    check_one("fig6_slow", kLoopDiagnosis);
}

TEST_CASE("fast fixtures yield no match for their rule") {
    auto g3 = build_cpg(fig("fig3_fast"));
    CHECK(detect_recursion_without_memoization(g3).empty());
    auto g4 = build_cpg(fig("fig4_fast"));
    CHECK(detect_static_replaceable_container(g4).empty());
    auto g5 = build_cpg(fig("fig5_fast"));
    CHECK(detect_slow_library_calls(g5, rules().slow_calls).empty());
    auto g6 = build_cpg(fig("fig6_fast"));
    CHECK(detect_loop_invariant_calls(g6).empty());
}

TEST_CASE("non-recursive method is not flagged") {
    auto g = build_cpg(SourceUnit::from_text(
        "int add(int a, int b){ return a + b; }\n"));
    CHECK(detect_recursion_without_memoization(g).empty());
}

TEST_CASE("locally declared memo table still flags the method") {
    auto g = build_cpg(SourceUnit::from_text(
        "int fib(int n){\n"
        "    int dp[105];\n"
        "    if (dp[n] != -1) return dp[n];\n"
        "    dp[n] = fib(n-1) + fib(n-2);\n"
        "    return dp[n];\n"
        "}\n"));
    REQUIRE(detect_recursion_without_memoization(g).size() == 1);
}

TEST_CASE("vector with insert is not static-replaceable") {
    auto g = build_cpg(SourceUnit::from_text(
        "std::vector<int> v;\nv.insert(v.begin(), 3);\n"));
    CHECK(detect_static_replaceable_container(g).empty());
}

TEST_CASE("two vectors, one static-replaceable") {
    auto g = build_cpg(SourceUnit::from_text(
        "std::vector<int> a;\n"
        "std::vector<int> b;\n"
        "a.push_back(1);\n"
        "b.resize(10);\n"));
    auto matches = detect_static_replaceable_container(g);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].entities[0].name == "a");
}

TEST_CASE("pow with integer literal exponent is flagged, variable is not") {
    auto flagged = build_cpg(SourceUnit::from_text("double y = pow(x, 2);\n"));
    CHECK(detect_slow_library_calls(flagged, rules().slow_calls).size() == 1);
    auto clean = build_cpg(SourceUnit::from_text("double y = pow(x, e);\n"));
    CHECK(detect_slow_library_calls(clean, rules().slow_calls).empty());
}

TEST_CASE("scanf and printf are never slow calls") {
    auto g = build_cpg(fig("fig5_fast"));
    CHECK(detect_slow_library_calls(g, rules().slow_calls).empty());
}

TEST_CASE("slow-call table is configuration data") {
    std::vector<SlowCallEntry> table = {{"gets", false}};
    auto g = build_cpg(SourceUnit::from_text("gets(buf);\ncin >> x;\n"));
    auto matches = detect_slow_library_calls(g, table);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].entities[0].name == "gets");
}

TEST_CASE("call taking the loop counter is not invariant") {
    auto g = build_cpg(SourceUnit::from_text(
        "for(int i=0;i<n;++i) {\n  use(i);\n}\n"));
    CHECK(detect_loop_invariant_calls(g).empty());
}

TEST_CASE("loop-invariant span covers trailing invariant declarations") {
    auto matches = detect_loop_invariant_calls(build_cpg(fig("fig6_slow")));
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].entities[0].span == LineSpan{3, 4});
}

TEST_CASE("instantiate rejects empty matches") {
    RuleMatch empty;
    empty.rule_id = "recursion_without_memoization";
    CHECK_THROWS_AS(instantiate(rules().rule("recursion_without_memoization"),
                                empty),
                    Error);
}

TEST_CASE("instantiate lists multiple entities in order") {
    RuleMatch m;
    m.rule_id = "slow_library_calls";
    m.entities.push_back({"call", "cin", {2, 2}});
    m.entities.push_back({"call", "cout", {4, 4}});
    auto d = instantiate(rules().rule("slow_library_calls"), m);
    CHECK(d.text == kIoDiagnosis);
    CHECK(d.category == "LibraryUsage");
}

TEST_CASE("diagnoses are ordered by rule_id then first line") {
    auto diagnoses = advise(SourceUnit::from_text(
        "int x;\n"
        "cin >> x;\n"
        "for(int i=0;i<x;++i) {\n"
        "  std::sort(a, a + n);\n"
        "}\n"),
        rules());
    REQUIRE(diagnoses.size() == 2);
    CHECK(diagnoses[0].rule_id == "loop_invariant_calls");
    CHECK(diagnoses[1].rule_id == "slow_library_calls");
}

TEST_CASE("clean source yields no diagnoses") {
    CHECK(advise(SourceUnit::from_text("int add(int a, int b){ return a + b; }\n"),
                 rules())
              .empty());
}

TEST_CASE("rule subset yields a diagnosis subset") {
    SourceUnit src = fig("fig5_slow");
    RuleSet reduced = rules();
    reduced.rules.erase(reduced.rules.begin());  // drop one rule
    auto full = advise(src, rules());
    auto part = advise(src, reduced);
    for (const auto& d : part) {
        bool present = false;
        for (const auto& f : full)
            if (f.rule_id == d.rule_id && f.text == d.text) present = true;
        CHECK(present);
    }
}

TEST_CASE("histogram over the four slow fixtures") {
    std::vector<SourceUnit> corpus = {fig("fig3_slow"), fig("fig4_slow"),
                                      fig("fig5_slow"), fig("fig6_slow")};
    auto counts = bottleneck_histogram(corpus, rules());
    CHECK(counts.at("InefficientAlgorithm") == 1);
    CHECK(counts.at("DataStructureUsage") == 1);
    CHECK(counts.at("LibraryUsage") == 2);
    CHECK(counts.at("LoopStructure") == 1);
}

TEST_CASE("histogram of an empty corpus is all zeros") {
    auto counts = bottleneck_histogram({}, rules());
    for (const auto& [category, count] : counts) CHECK(count == 0);
}

TEST_CASE("histogram records skipped unparseable units") {
    std::vector<std::string> skipped;
    std::vector<SourceUnit> corpus = {SourceUnit::from_text("", "empty.cpp"),
                                      fig("fig5_slow")};
    auto counts = bottleneck_histogram(corpus, rules(), &skipped);
    CHECK(counts.at("LibraryUsage") == 2);
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0] == "empty.cpp");
}

TEST_CASE("check_resolved distinguishes fixed from unchanged code") {
    CHECK(check_resolved("slow_library_calls", fig("fig5_fast"), rules()));
    CHECK(!check_resolved("slow_library_calls", fig("fig5_slow"), rules()));
}

TEST_CASE("partially fixed I/O is still unresolved") {
    SourceUnit partial = SourceUnit::from_text(
        "int x, y;\nscanf(\"%d %d\", &x, &y);\nint res = gcd(x, y);\ncout << "
        "res << endl;\n");
    CHECK(!check_resolved("slow_library_calls", partial, rules()));
}

TEST_CASE("advise is deterministic") {
    auto a = advise(fig("fig6_slow"), rules());
    auto b = advise(fig("fig6_slow"), rules());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].text == b[i].text);
}
