#include <doctest.h>

#include "eco/errors.hpp"
#include "eco/gateway.hpp"
#include "eco/roi_store.hpp"
#include "eco/templates.hpp"
#include "helpers.hpp"

using namespace eco;
using eco_test::read_file;
using eco_test::scratch;
using eco_test::write_file;

static const char* kFig2Response =
    "Reasoning about the pair step by step...\n"
    "</think>\n"
    "The optimization points between the slow and fast code can be identified "
    "as follows.\n"
    "\n"
    "{\n"
    "\"optimization_points\": [\n"
    "  {\n"
    "    \"description\": \"The slow code uses cout which is slower due to "
    "object overhead. The fast code switches to printf, improving I/O "
    "efficiency.\",\n"
    "    \"runtime_improvement\": 8,\n"
    "    \"category\": \"Algorithm\"\n"
    "  },\n"
    "  {\n"
    "    \"description\": \"Precomputing the multiplication result before "
    "printing reduces redundant calculations in each loop iteration.\",\n"
    "    \"runtime_improvement\": 6,\n"
    "    \"category\": \"Algorithm\"\n"
    "  },\n"
    "  {\n"
    "    \"description\": \"Using i < 10 instead of i <= 9 slightly improves "
    "loop condition efficiency, though the impact is minor.\",\n"
    "    \"runtime_improvement\": 3,\n"
    "    \"category\": \"Code Execution\"\n"
    "  }\n"
    "]\n"
    "}\n";

TEST_CASE("parse_instruction extracts the wrapped array and drops reasoning") {
    auto instr = parse_instruction(kFig2Response);
    CHECK(instr.raw_text.find("Reasoning about") == std::string::npos);
    CHECK(instr.raw_text.find("optimization points") != std::string::npos);
    REQUIRE(instr.points.size() == 3);
    CHECK(instr.points[0].runtime_improvement == 8);
    CHECK(instr.points[0].category == "Algorithm");
    CHECK(instr.points[2].runtime_improvement == 3);
    CHECK(!instr.parse_warning);
}

TEST_CASE("response without an array keeps raw text with a warning") {
    auto instr = parse_instruction("Just prose, no JSON at all.");
    CHECK(instr.raw_text == "Just prose, no JSON at all.");
    CHECK(instr.points.empty());
    CHECK(instr.parse_warning);
}

TEST_CASE("the last well-formed array wins") {
    std::string response =
        "[{\"description\": \"first\", \"runtime_improvement\": 2}]\n"
        "text between\n"
        "[{\"description\": \"second\", \"runtime_improvement\": 5}]\n";
    auto instr = parse_instruction(response);
    REQUIRE(instr.points.size() == 1);
    CHECK(instr.points[0].description == "second");
}

TEST_CASE("out-of-range ratings are dropped") {
    auto instr = parse_instruction(
        "[{\"description\": \"a\", \"runtime_improvement\": 11},"
        "{\"description\": \"b\", \"runtime_improvement\": 7}]");
    REQUIRE(instr.points.size() == 1);
    CHECK(instr.points[0].description == "b");
}

TEST_CASE("marker is configurable") {
    auto instr = parse_instruction("think<END>[{\"description\": \"x\"}]",
                                   "<END>");
    CHECK(instr.raw_text == "[{\"description\": \"x\"}]");
    REQUIRE(instr.points.size() == 1);
}

static RoiTriplet make_triplet(const std::string& id) {
    RoiTriplet t;
    t.pair.pair_id = id;
    t.pair.problem_id = "p" + id;
    t.pair.slow = SourceUnit::from_text("slow " + id + "\n");
    t.pair.fast = SourceUnit::from_text("fast " + id + "\n");
    t.instruction.raw_text = "instruction " + id;
    t.instruction.points.push_back({"point " + id, 5, "Algorithm"});
    return t;
}

TEST_CASE("database round-trips byte-identically") {
    auto dir = scratch("roi_roundtrip");
    RoiDatabase db;
    for (const auto& id : {"a", "b", "c"}) db.add(make_triplet(id));
    db.save(dir / "db.jsonl");
    auto loaded = RoiDatabase::load(dir / "db.jsonl");
    REQUIRE(loaded.size() == 3);
    CHECK(loaded.errors().empty());
    loaded.save(dir / "db2.jsonl");
    CHECK(read_file(dir / "db.jsonl") == read_file(dir / "db2.jsonl"));
    CHECK(loaded.triplets()[1].pair.slow.text == "slow b\n");
    CHECK(loaded.triplets()[1].instruction.points[0].description == "point b");
}

TEST_CASE("empty database round-trips") {
    auto dir = scratch("roi_empty");
    RoiDatabase db;
    db.save(dir / "db.jsonl");
    CHECK(RoiDatabase::load(dir / "db.jsonl").empty());
}

TEST_CASE("corrupt lines are reported, others load") {
    auto dir = scratch("roi_corrupt");
    RoiDatabase db;
    db.add(make_triplet("a"));
    db.add(make_triplet("b"));
    db.save(dir / "db.jsonl");
    std::string text = read_file(dir / "db.jsonl");
    write_file(dir / "db.jsonl", text + "{not json\n");
    auto loaded = RoiDatabase::load(dir / "db.jsonl");
    CHECK(loaded.size() == 2);
    REQUIRE(loaded.errors().size() == 1);
    CHECK(loaded.errors()[0].find("line 3") != std::string::npos);
}

TEST_CASE("build_db distills pairs through the mock gateway and is idempotent") {
    auto dir = scratch("roi_build");
    auto templates = TemplateSet::load(eco_test::asset_dir() / "templates");
    std::vector<CodePair> pairs;
    for (const auto& id : {"p1", "p2", "p3"}) {
        CodePair p;
        p.pair_id = id;
        p.problem_id = id;
        p.slow = SourceUnit::from_text(std::string("cout << ") + id + ";\n");
        p.fast = SourceUnit::from_text(std::string("printf(") + id + ");\n");
        pairs.push_back(p);
    }
    std::filesystem::create_directories(dir / "mock");
    for (const auto& p : pairs) {
        std::string prompt = make_distill_prompt(p, templates.get("distill"));
        write_file(dir / "mock" / (prompt_hash(prompt) + ".txt"), kFig2Response);
    }
    GatewayConfig cfg;
    cfg.mock_dir = dir / "mock";
    Gateway gateway(cfg);

    RoiDatabase db;
    build_db(db, pairs, gateway, templates.get("distill"));
    CHECK(db.size() == 3);
    CHECK(db.errors().empty());
    build_db(db, pairs, gateway, templates.get("distill"));
    CHECK(db.size() == 3);
}

TEST_CASE("per-pair distillation failures are recorded, not thrown") {
    auto dir = scratch("roi_fail");
    std::filesystem::create_directories(dir / "mock");
    GatewayConfig cfg;
    cfg.mock_dir = dir / "mock";
    Gateway gateway(cfg);
    auto templates = TemplateSet::load(eco_test::asset_dir() / "templates");
    CodePair p;
    p.pair_id = "x";
    p.problem_id = "x";
    p.slow = SourceUnit::from_text("a\n");
    p.fast = SourceUnit::from_text("b\n");
    RoiDatabase db;
    build_db(db, {p}, gateway, templates.get("distill"));
    CHECK(db.empty());
    REQUIRE(db.errors().size() == 1);
}
