#include "eco/pipeline.hpp"

#include <algorithm>

#include "eco/errors.hpp"

namespace eco {

Problem load_problem(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error("problem directory not found: " + dir.string());
    Problem p;
    p.id = dir.filename().string();
    p.dir = dir;

    std::vector<std::filesystem::path> sources;
    std::filesystem::path src_dir = dir / "src";
    if (std::filesystem::is_directory(src_dir))
        for (const auto& e : std::filesystem::directory_iterator(src_dir))
            if (e.path().extension() == ".cpp") sources.push_back(e.path());
    if (sources.empty()) throw Error("no src/*.cpp in " + dir.string());
    std::sort(sources.begin(), sources.end());
    p.original = SourceUnit::from_file(sources.front());

    for (int n = 0;; ++n) {
        std::filesystem::path in = dir / ("input." + std::to_string(n) + ".txt");
        std::filesystem::path out = dir / ("output." + std::to_string(n) + ".txt");
        bool have_in = std::filesystem::exists(in);
        bool have_out = std::filesystem::exists(out);
        if (!have_in && !have_out) {
            if (n > 0) break;
            continue;  // allow numbering to start at 1
        }
        if (!have_in || !have_out)
            throw Error("unpaired test case " + std::to_string(n) + " in " +
                        dir.string());
        TestCase c;
        c.case_id = std::to_string(n);
        c.input = SourceUnit::from_file(in).text;
        c.expected_output = SourceUnit::from_file(out).text;
        p.cases.push_back(std::move(c));
    }
    if (p.cases.empty()) throw Error("no test cases in " + dir.string());
    return p;
}

std::vector<Problem> load_problems(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root))
        throw Error("problems root not found: " + root.string());
    std::vector<std::filesystem::path> dirs;
    for (const auto& e : std::filesystem::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<Problem> out;
    for (const auto& d : dirs) out.push_back(load_problem(d));
    if (out.empty()) throw Error("no problems under " + root.string());
    return out;
}

std::string extract_candidate_code(const std::string& response) {
    size_t marker = response.find("Optimized Code");
    if (marker == std::string::npos) return "";
    size_t fence = response.find("```", marker);
    if (fence == std::string::npos) return "";
    size_t body = response.find('\n', fence);
    if (body == std::string::npos) return "";
    ++body;
    size_t close = response.find("```", body);
    if (close == std::string::npos) return "";
    return response.substr(body, close - body);
}

EvalRecord evaluate_candidate(const Problem& problem, const SourceUnit& candidate,
                              int candidate_id, const PipelineConfig& config) {
    EvalRecord rec;
    rec.candidate_id = candidate_id;

    std::filesystem::path scratch =
        config.work_dir / problem.id / ("cand" + std::to_string(candidate_id));
    Binary original =
        compile(problem.original, config.compile, scratch / "original");

    std::vector<std::string> passing;
    double t_o = 0.0;
    for (const auto& c : problem.cases) {
        RunResult r = run_case(original, c, config.reps, config.timeout_seconds);
        if (r.passed) {
            passing.push_back(c.case_id);
            t_o += r.runtime;
        }
    }
    if (passing.empty() || t_o <= 0.0)
        throw Error("original program passes no test case for problem " +
                    problem.id);

    Binary cand;
    try {
        cand = compile(candidate, config.compile, scratch / "new");
    } catch (const CompileError&) {
        rec.correct = false;
        rec.t_original = t_o;
        rec.t_new = t_o;
        rec.sp = 1.0;
        rec.opt = false;
        return rec;
    }

    bool all_passed = true;
    double t_n = 0.0;
    for (const auto& c : problem.cases) {
        RunResult r = run_case(cand, c, config.reps, config.timeout_seconds);
        if (!r.passed) all_passed = false;
        if (std::find(passing.begin(), passing.end(), c.case_id) !=
            passing.end())
            t_n += r.runtime;
    }
    rec.correct = all_passed;
    rec.t_original = t_o;
    rec.t_new = t_n > 0.0 ? t_n : t_o;
    rec.sp = speedup(rec.t_original, rec.t_new, rec.correct);
    rec.opt = opt_flag(rec.t_original, rec.t_new, rec.correct);
    return rec;
}

E2ESummary run_e2e(const std::vector<Problem>& problems, const RoiDatabase& db,
                   const RetrievalIndex& index, Gateway& gateway,
                   const RuleSet& rules, const TemplateSet& templates,
                   const PipelineConfig& config) {
    E2ESummary summary;
    std::vector<EvalRecord> bests;
    for (const auto& problem : problems) {
        ProblemOutcome outcome;
        outcome.problem_id = problem.id;
        try {
            auto diagnoses = advise(problem.original, rules);
            PerformanceAnalysis analysis = analyze_performance(
                problem.original, gateway, templates.get("analysis"));
            auto ranked = index.retrieve(analysis.text, config.top_k);
            std::vector<RoiTriplet> triplets;
            for (const auto& s : ranked)
                triplets.push_back(db.triplets()[s.index]);
            PromptBundle prompt =
                compose_combined(diagnoses, triplets, problem.original, templates);
            outcome.prompt = prompt.text;
            GenerationResponse resp = gateway.complete(prompt.text);
            outcome.response = resp.text;
            std::string code = extract_candidate_code(resp.text);
            if (code.empty()) {
                outcome.record.candidate_id = 0;
                outcome.record.correct = false;
                outcome.record.sp = 1.0;
            } else {
                outcome.record = evaluate_candidate(
                    problem, SourceUnit::from_text(code), 0, config);
            }
            outcome.ok = true;
            bests.push_back(outcome.record);
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.error = e.what();
            ++summary.failures;
        }
        summary.outcomes.push_back(std::move(outcome));
    }
    if (!bests.empty()) summary.metrics = aggregate({bests});
    return summary;
}

}  // namespace eco
