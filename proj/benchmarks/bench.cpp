#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "eco/advisor.hpp"
#include "eco/cpg.hpp"
#include "eco/retriever.hpp"

namespace {

std::string synthetic_source(int loops) {
    std::string src = "int work(int a, int b){ return a + b; }\n";
    for (int i = 0; i < loops; ++i) {
        std::string v = "v" + std::to_string(i);
        src += "for (int i = 0; i < n; ++i) {\n";
        src += "    int " + v + " = work(x, y);\n";
        src += "    total += " + v + ";\n";
        src += "}\n";
    }
    return src;
}

eco::RoiDatabase synthetic_db(int entries) {
    std::mt19937 rng(17);
    const char* vocab[] = {"loop",  "vector", "sort",  "memo",   "printf",
                           "cache", "alloc",  "index", "branch", "inline"};
    eco::RoiDatabase db;
    for (int i = 0; i < entries; ++i) {
        eco::RoiTriplet t;
        t.pair.pair_id = "p" + std::to_string(i);
        t.pair.slow = eco::SourceUnit::from_text("s\n");
        t.pair.fast = eco::SourceUnit::from_text("f\n");
        std::string text;
        for (int w = 0; w < 12; ++w) {
            if (w) text += ' ';
            text += vocab[rng() % 10];
        }
        t.instruction.raw_text = text;
        db.add(std::move(t));
    }
    return db;
}

void BM_BuildCpg(benchmark::State& state) {
    auto src = eco::SourceUnit::from_text(
        synthetic_source(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        auto g = eco::build_cpg(src);
        benchmark::DoNotOptimize(g.methods().size());
    }
}
BENCHMARK(BM_BuildCpg)->Arg(8)->Arg(64)->Arg(256);

void BM_Embed(benchmark::State& state) {
    eco::Embedder embedder(512);
    std::string text = synthetic_source(16);
    for (auto _ : state) {
        auto v = embedder.embed(text);
        benchmark::DoNotOptimize(v.data());
    }
}
BENCHMARK(BM_Embed);

void BM_Retrieve(benchmark::State& state) {
    auto db = synthetic_db(static_cast<int>(state.range(0)));
    auto index = eco::RetrievalIndex::build(db, 256);
    std::string query = "sort the vector with a cache inside the loop";
    for (auto _ : state) {
        auto hits = index.retrieve(query, 5);
        benchmark::DoNotOptimize(hits.data());
    }
}
BENCHMARK(BM_Retrieve)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
