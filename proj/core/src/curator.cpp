#include "eco/curator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "eco/errors.hpp"

namespace eco {

std::vector<ProblemSample> cap_per_problem(std::vector<ProblemSample> samples,
                                           int cap) {
    if (cap < 1) throw Error("cap must be at least 1");
    std::vector<std::string> order;
    std::map<std::string, std::vector<ProblemSample>> by_problem;
    for (auto& s : samples) {
        if (!by_problem.count(s.problem_id)) order.push_back(s.problem_id);
        by_problem[s.problem_id].push_back(std::move(s));
    }
    std::vector<ProblemSample> out;
    for (const auto& pid : order) {
        auto& group = by_problem[pid];
        std::stable_sort(group.begin(), group.end(),
                         [](const ProblemSample& a, const ProblemSample& b) {
                             return a.sample_id < b.sample_id;
                         });
        for (size_t i = 0; i < group.size() && i < static_cast<size_t>(cap); ++i)
            out.push_back(std::move(group[i]));
    }
    return out;
}

static std::set<std::string> grams(const std::string& s, int n) {
    std::set<std::string> out;
    for (size_t i = 0; i + n <= s.size(); ++i) out.insert(s.substr(i, n));
    return out;
}

double ngram_similarity(const std::string& a, const std::string& b, int n) {
    if (n < 1) throw Error("n must be at least 1");
    std::set<std::string> ga = grams(a, n), gb = grams(b, n);
    if (ga.empty() && gb.empty()) return a == b ? 1.0 : 0.0;
    size_t inter = 0;
    for (const auto& g : ga)
        if (gb.count(g)) ++inter;
    size_t uni = ga.size() + gb.size() - inter;
    return static_cast<double>(inter) / uni;
}

std::vector<TestCase> dedup_cases(std::vector<TestCase> cases, int n,
                                  double threshold, int max_keep) {
    if (n < 1) throw Error("n must be at least 1");
    if (threshold <= 0.0 || threshold > 1.0)
        throw Error("threshold must be in (0, 1]");
    if (max_keep < 1) throw Error("max_keep must be at least 1");
    std::stable_sort(cases.begin(), cases.end(),
                     [](const TestCase& a, const TestCase& b) {
                         return (a.origin == "official") > (b.origin == "official");
                     });
    std::vector<TestCase> kept;
    for (auto& c : cases) {
        if (kept.size() >= static_cast<size_t>(max_keep)) break;
        bool fresh = true;
        for (const auto& k : kept)
            if (ngram_similarity(c.input, k.input, n) >= threshold) {
                fresh = false;
                break;
            }
        if (fresh) kept.push_back(std::move(c));
    }
    return kept;
}

}  // namespace eco
