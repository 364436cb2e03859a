#include "eco/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "eco/errors.hpp"
#include "subprocess.hpp"

namespace eco {

Binary compile(const SourceUnit& src, const CompileConfig& config,
               const std::filesystem::path& work_dir) {
    std::filesystem::create_directories(work_dir);
    std::filesystem::path cpp = work_dir / "candidate.cpp";
    {
        std::ofstream out(cpp, std::ios::binary | std::ios::trunc);
        out << src.text;
    }
    std::filesystem::path bin = work_dir / "candidate.bin";

    internal::RunSpec spec;
    spec.argv.push_back(config.compiler);
    for (const auto& f : config.flags) spec.argv.push_back(f);
    spec.argv.push_back(cpp.string());
    spec.argv.push_back("-o");
    spec.argv.push_back(bin.string());
    spec.timeout_seconds = 60.0;

    internal::RunOutcome outcome = internal::run_process(spec);
    if (outcome.exit_code != 0)
        throw CompileError(outcome.err.empty() ? outcome.out : outcome.err);

    Binary b;
    b.path = bin;
    for (const auto& a : spec.argv) {
        if (!b.compile_command.empty()) b.compile_command += ' ';
        b.compile_command += a;
    }
    return b;
}

std::string normalize_output(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::string line;
    auto flush_line = [&](bool newline) {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                                 line.back() == '\r'))
            line.pop_back();
        out += line;
        if (newline) out += '\n';
        line.clear();
    };
    for (char c : text) {
        if (c == '\n')
            flush_line(true);
        else
            line += c;
    }
    if (!line.empty()) flush_line(false);
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

static std::mutex timing_mutex;

RunResult run_case(const Binary& binary, const TestCase& test_case, int reps,
                   double timeout_seconds) {
    if (reps < 3 || reps % 2 == 0)
        throw Error("reps must be odd and at least 3");
    std::lock_guard<std::mutex> lock(timing_mutex);

    RunResult result;
    result.case_id = test_case.case_id;

    internal::RunSpec spec;
    spec.argv = {binary.path.string()};
    spec.stdin_data = test_case.input;
    spec.timeout_seconds = timeout_seconds;

    std::vector<double> times;
    for (int i = 0; i < reps; ++i) {
        internal::RunOutcome outcome = internal::run_process(spec);
        if (outcome.timed_out) {
            result.timed_out = true;
            result.passed = false;
            result.exit_status = outcome.exit_code;
            result.runtime = outcome.wall_seconds;
            return result;
        }
        if (outcome.exit_code != 0) {
            result.passed = false;
            result.exit_status = outcome.exit_code;
            result.runtime = outcome.wall_seconds;
            return result;
        }
        if (i == 0) {
            result.exit_status = outcome.exit_code;
            result.passed = normalize_output(outcome.out) ==
                            normalize_output(test_case.expected_output);
        }
        times.push_back(outcome.wall_seconds);
    }
    std::sort(times.begin(), times.end());
    result.runtime = times[times.size() / 2];
    return result;
}

bool accuracy(const std::vector<RunResult>& results) {
    if (results.empty()) throw Error("no run results");
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

double speedup(double t_o, double t_n, bool correct) {
    if (t_o <= 0.0 || t_n <= 0.0) throw NonpositiveTime();
    if (correct && t_n < t_o) return t_o / t_n;
    return 1.0;
}

bool opt_flag(double t_o, double t_n, bool correct) {
    if (t_o <= 0.0 || t_n <= 0.0) throw NonpositiveTime();
    return correct && (t_o - t_n > 0.1 * t_o);
}

EvalRecord best_at_k(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw Error("no candidates");
    const EvalRecord* best = &records[0];
    for (const auto& r : records) {
        if (r.sp > best->sp ||
            (r.sp == best->sp && r.correct && !best->correct) ||
            (r.sp == best->sp && r.correct == best->correct &&
             r.candidate_id < best->candidate_id))
            best = &r;
    }
    return *best;
}

MetricsSummary aggregate(const std::vector<std::vector<EvalRecord>>& trials) {
    if (trials.empty()) throw Error("no trials");
    std::vector<double> accs, sps, opts;
    for (const auto& trial : trials) {
        if (trial.empty()) throw Error("empty trial");
        double acc = 0.0, sp = 0.0, opt = 0.0;
        for (const auto& r : trial) {
            acc += r.correct ? 1.0 : 0.0;
            sp += r.sp;
            opt += r.opt ? 1.0 : 0.0;
        }
        accs.push_back(100.0 * acc / trial.size());
        sps.push_back(sp / trial.size());
        opts.push_back(100.0 * opt / trial.size());
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto stddev = [&](const std::vector<double>& v, double m) {
        if (v.size() < 2) return 0.0;
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / v.size());
    };
    MetricsSummary out;
    out.acc_percent = mean(accs);
    out.mean_sp = mean(sps);
    out.opt_percent = mean(opts);
    out.acc_stddev = stddev(accs, out.acc_percent);
    out.sp_stddev = stddev(sps, out.mean_sp);
    out.opt_stddev = stddev(opts, out.opt_percent);
    return out;
}

}  // namespace eco
