#include <doctest.h>

#include "eco/errors.hpp"
#include "eco/pipeline.hpp"
#include "helpers.hpp"

using namespace eco;
using eco_test::scratch;
using eco_test::write_file;

TEST_CASE("extract_candidate_code takes the first fence after the marker") {
    std::string response =
        "Reasoning first.\n"
        "### Optimized Code:\n"
        "```cpp\nint main(){ return 0; }\n```\n"
        "```\nint other(){}\n```\n";
    CHECK(extract_candidate_code(response) == "int main(){ return 0; }\n");
}

TEST_CASE("extraction tolerates bare fences and inline marker text") {
    CHECK(extract_candidate_code("Optimized Code below\n```\nx;\n```") ==
          "x;\n");
    CHECK(extract_candidate_code("### Optimized Code:\n```\n\n```") == "\n");
}

TEST_CASE("missing marker or fences yield the empty string") {
    CHECK(extract_candidate_code("no marker\n```\nx;\n```").empty());
    CHECK(extract_candidate_code("### Optimized Code:\nno fence").empty());
    CHECK(extract_candidate_code("### Optimized Code:\n```\nunterminated")
              .empty());
    CHECK(extract_candidate_code("").empty());
}

TEST_CASE("fences before the marker are ignored") {
    std::string response =
        "```\nslow version\n```\n### Optimized Code:\n```\nfast;\n```\n";
    CHECK(extract_candidate_code(response) == "fast;\n");
}

static void write_problem(const std::filesystem::path& dir,
                          const std::string& src) {
    write_file(dir / "src" / "main.cpp", src);
    write_file(dir / "input.0.txt", "3\n");
    write_file(dir / "output.0.txt", "3\n");
    write_file(dir / "input.1.txt", "7\n");
    write_file(dir / "output.1.txt", "7\n");
}

static const char* kEchoSrc =
    "#include <cstdio>\n"
    "int main(){ int x; if (scanf(\"%d\", &x) == 1) printf(\"%d\\n\", x); "
    "return 0; }\n";

TEST_CASE("load_problem reads the layout") {
    auto dir = scratch("pipe_load");
    write_problem(dir / "p1", kEchoSrc);
    write_file(dir / "p1" / "src" / "alt.cpp", "// unused\n");
    auto problem = load_problem(dir / "p1");
    CHECK(problem.id == "p1");
    // First source lexicographically: alt.cpp before main.cpp.
    CHECK(problem.original.text == "// unused\n");
    REQUIRE(problem.cases.size() == 2);
    CHECK(problem.cases[0].input == "3\n");
    CHECK(problem.cases[1].expected_output == "7\n");
}

TEST_CASE("load_problem rejects broken layouts") {
    auto dir = scratch("pipe_broken");
    write_file(dir / "a" / "src" / "main.cpp", kEchoSrc);
    CHECK_THROWS_AS(load_problem(dir / "a"), Error);  // no cases
    write_file(dir / "b" / "input.0.txt", "1\n");
    write_file(dir / "b" / "src" / "main.cpp", kEchoSrc);
    CHECK_THROWS_AS(load_problem(dir / "b"), Error);  // unpaired input
    write_file(dir / "c" / "input.0.txt", "1\n");
    write_file(dir / "c" / "output.0.txt", "1\n");
    CHECK_THROWS_AS(load_problem(dir / "c"), Error);  // no source
}

TEST_CASE("load_problems walks subdirectories in sorted order") {
    auto dir = scratch("pipe_walk");
    write_problem(dir / "p2", kEchoSrc);
    write_problem(dir / "p1", kEchoSrc);
    auto problems = load_problems(dir);
    REQUIRE(problems.size() == 2);
    CHECK(problems[0].id == "p1");
    CHECK(problems[1].id == "p2");
}

TEST_CASE("evaluate_candidate scores a correct identical candidate") {
    auto dir = scratch("pipe_eval");
    write_problem(dir / "p", kEchoSrc);
    auto problem = load_problem(dir / "p");
    PipelineConfig config;
    config.reps = 3;
    config.timeout_seconds = 5.0;
    config.work_dir = dir / "work";
    auto record = evaluate_candidate(problem, SourceUnit::from_text(kEchoSrc),
                                     0, config);
    CHECK(record.correct);
    CHECK(record.t_original > 0.0);
    CHECK(record.t_new > 0.0);
    CHECK(record.sp > 0.0);
}

TEST_CASE("wrong and non-compiling candidates score incorrect with sp 1") {
    auto dir = scratch("pipe_wrong");
    write_problem(dir / "p", kEchoSrc);
    auto problem = load_problem(dir / "p");
    PipelineConfig config;
    config.reps = 3;
    config.timeout_seconds = 5.0;
    config.work_dir = dir / "work";

    auto wrong = evaluate_candidate(
        problem,
        SourceUnit::from_text("#include <cstdio>\nint main(){ "
                              "printf(\"0\\n\"); return 0; }\n"),
        1, config);
    CHECK(!wrong.correct);
    CHECK(wrong.sp == doctest::Approx(1.0));

    auto broken = evaluate_candidate(
        problem, SourceUnit::from_text("int main( { oops\n"), 2, config);
    CHECK(!broken.correct);
    CHECK(broken.sp == doctest::Approx(1.0));
    CHECK(!broken.opt);
}
