#include <doctest.h>

#include "eco/errors.hpp"
#include "eco/templates.hpp"
#include "helpers.hpp"

using namespace eco;

TEST_CASE("substitute replaces bound placeholders") {
    CHECK(substitute("a {x} b {y}", {{"x", "1"}, {"y", "2"}}) == "a 1 b 2");
}

TEST_CASE("unbound identifier-shaped placeholder throws") {
    CHECK_THROWS_AS(substitute("a {missing} b", {{"x", "1"}}),
                    MissingPlaceholder);
}

TEST_CASE("non-placeholder braces pass through") {
    std::string json_ish = "[\n  {\n    \"description\": \"x\"\n  }\n]\n{k}";
    CHECK(substitute(json_ish, {{"k", "v"}}) ==
          "[\n  {\n    \"description\": \"x\"\n  }\n]\nv");
    CHECK(substitute("int main() { return 0; }", {}) ==
          "int main() { return 0; }");
}

TEST_CASE("substituted content is not rescanned") {
    CHECK(substitute("{a}", {{"a", "{b}"}}) == "{b}");
}

TEST_CASE("template set loads the shipped assets") {
    auto ts = TemplateSet::load(eco_test::asset_dir() / "templates");
    for (const char* name :
         {"symbolic", "baseline_cot", "baseline_instruction", "retrieval_header",
          "retrieval_example", "retrieval_footer", "distill", "analysis"})
        CHECK(ts.has(name));
    CHECK_THROWS_AS(ts.get("nope"), ConfigError);
    CHECK_THROWS_AS(TemplateSet::load("/nonexistent-dir"), ConfigError);
}
