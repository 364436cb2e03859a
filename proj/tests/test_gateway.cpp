#include <doctest.h>

#include "eco/errors.hpp"
#include "eco/gateway.hpp"
#include "helpers.hpp"

using namespace eco;
using eco_test::scratch;
using eco_test::write_file;

TEST_CASE("prompt_hash is stable and 16 hex digits") {
    CHECK(prompt_hash("abc") == prompt_hash("abc"));
    CHECK(prompt_hash("abc") != prompt_hash("abd"));
    CHECK(prompt_hash("").size() == 16);
    // Frozen FNV-1a 64 reference value.
    CHECK(prompt_hash("abc") == "e71fa2190541574b");
}

TEST_CASE("token estimator counts words and punctuation") {
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("hello world") == 2);
    CHECK(estimate_tokens("f(x);") == 5);
    CHECK(estimate_tokens("  a  \n b ") == 2);
}

TEST_CASE("truncation fits the budget and preserves the prefix") {
    std::string text = "one two three four five";
    CHECK(truncate_to_budget(text, 100) == text);
    std::string cut = truncate_to_budget(text, 3);
    CHECK(estimate_tokens(cut) <= 3);
    CHECK(text.rfind(cut, 0) == 0);
    CHECK(cut == "one two three ");
}

TEST_CASE("mock mode answers from hash-named fixtures deterministically") {
    auto dir = scratch("gateway_mock");
    write_file(dir / (prompt_hash("the prompt") + ".txt"), "canned answer");
    GatewayConfig cfg;
    cfg.mock_dir = dir;
    Gateway gw(cfg);
    CHECK(gw.complete("the prompt").text == "canned answer");
    CHECK(gw.complete("the prompt").text == gw.complete("the prompt").text);
}

TEST_CASE("missing fixture names the hash") {
    auto dir = scratch("gateway_miss");
    GatewayConfig cfg;
    cfg.mock_dir = dir;
    Gateway gw(cfg);
    try {
        gw.complete("unknown prompt");
        FAIL("expected FixtureMiss");
    } catch (const FixtureMiss& e) {
        CHECK(e.hash == prompt_hash("unknown prompt"));
    }
}

TEST_CASE("prompts over the input budget hit the truncated fixture") {
    auto dir = scratch("gateway_budget");
    GatewayConfig cfg;
    cfg.mock_dir = dir;
    cfg.max_input_tokens = 2;
    std::string prompt = "alpha beta gamma delta";
    write_file(dir / (prompt_hash(truncate_to_budget(prompt, 2)) + ".txt"),
               "short");
    Gateway gw(cfg);
    CHECK(gw.complete(prompt).text == "short");
}

TEST_CASE("configuration requires an endpoint or mock directory") {
    CHECK_THROWS_AS(Gateway(GatewayConfig{}), ConfigError);
}

TEST_CASE("empty prompt is rejected") {
    auto dir = scratch("gateway_empty");
    GatewayConfig cfg;
    cfg.mock_dir = dir;
    Gateway gw(cfg);
    CHECK_THROWS_AS(gw.complete(""), GatewayError);
}
