#pragma once

#include <string>
#include <vector>

#include "eco/evaluator.hpp"
#include "eco/source_unit.hpp"

namespace eco {

struct ProblemSample {
    std::string problem_id;
    std::string sample_id;
    SourceUnit source;
    std::vector<TestCase> cases;
};

/// At most `cap` samples per problem, chosen by ascending sample_id;
/// problem order follows first appearance in the input.
std::vector<ProblemSample> cap_per_problem(std::vector<ProblemSample> samples,
                                           int cap);

/// Jaccard similarity of character n-gram sets. Texts shorter than n have an
/// empty gram set; two empty sets compare 1.0 when the texts are equal.
double ngram_similarity(const std::string& a, const std::string& b, int n);

/// Greedy pass in priority order (official before generated, stable within
/// class): keep a case iff its input's similarity to every kept input is
/// below `threshold`; stop at max_keep.
std::vector<TestCase> dedup_cases(std::vector<TestCase> cases, int n = 4,
                                  double threshold = 0.9, int max_keep = 10);

}  // namespace eco
