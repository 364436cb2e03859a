#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eco/advisor.hpp"
#include "eco/composer.hpp"
#include "eco/evaluator.hpp"
#include "eco/gateway.hpp"
#include "eco/retriever.hpp"
#include "eco/roi_store.hpp"
#include "eco/templates.hpp"

namespace eco {

struct Problem {
    std::string id;
    std::filesystem::path dir;
    SourceUnit original;          // first src/*.cpp lexicographically
    std::vector<TestCase> cases;  // input.N.txt / output.N.txt pairs
};

/// Layout: `<dir>/input.N.txt`, `<dir>/output.N.txt`, `<dir>/src/*.cpp`.
Problem load_problem(const std::filesystem::path& dir);
std::vector<Problem> load_problems(const std::filesystem::path& root);

/// First fenced code block after the "Optimized Code" marker; empty string
/// when the marker or fences are absent (candidate then scores incorrect).
std::string extract_candidate_code(const std::string& response);

struct PipelineConfig {
    int top_k = 2;        // retrieved examples per prompt
    int reps = 5;         // timing repetitions, odd
    double timeout_seconds = 2.0;
    CompileConfig compile;
    std::filesystem::path work_dir;  // scratch space for binaries
};

struct ProblemOutcome {
    std::string problem_id;
    bool ok = false;
    std::string error;  // set when !ok
    EvalRecord record;
    std::string prompt;
    std::string response;
};

struct E2ESummary {
    MetricsSummary metrics;
    std::vector<ProblemOutcome> outcomes;
    int failures = 0;
};

/// Evaluate one candidate source against a problem. T(o) and T(n) are sums of
/// per-case median runtimes over the cases the original program passes;
/// correctness requires the candidate to pass every case.
EvalRecord evaluate_candidate(const Problem& problem, const SourceUnit& candidate,
                              int candidate_id, const PipelineConfig& config);

/// Full loop per problem: advise, analyze, retrieve, compose the combined
/// prompt, query the gateway, extract the candidate, evaluate.
E2ESummary run_e2e(const std::vector<Problem>& problems, const RoiDatabase& db,
                   const RetrievalIndex& index, Gateway& gateway,
                   const RuleSet& rules, const TemplateSet& templates,
                   const PipelineConfig& config);

}  // namespace eco
