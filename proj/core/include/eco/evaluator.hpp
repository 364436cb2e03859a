#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eco/source_unit.hpp"

namespace eco {

struct TestCase {
    std::string case_id;
    std::string input;
    std::string expected_output;
    std::string origin = "official";  // "official" | "generated"
};

struct CompileConfig {
    std::string compiler = "g++";
    std::vector<std::string> flags = {"-std=c++17", "-O3"};
};

struct Binary {
    std::filesystem::path path;
    std::string compile_command;
};

struct RunResult {
    std::string case_id;
    bool passed = false;
    double runtime = 0.0;  // median of repetitions, seconds
    int exit_status = -1;
    bool timed_out = false;
};

struct EvalRecord {
    int candidate_id = 0;
    bool correct = false;
    double t_original = 1.0;
    double t_new = 1.0;
    double sp = 1.0;
    bool opt = false;
};

struct MetricsSummary {
    double acc_percent = 0.0;
    double mean_sp = 1.0;
    double opt_percent = 0.0;
    double acc_stddev = 0.0;
    double sp_stddev = 0.0;
    double opt_stddev = 0.0;
};

/// Compile to a binary under work_dir; throws CompileError with diagnostics.
Binary compile(const SourceUnit& src, const CompileConfig& config,
               const std::filesystem::path& work_dir);

/// Strip trailing whitespace per line and trailing final newlines.
std::string normalize_output(const std::string& text);

/// reps must be odd and >= 3. Timing runs are serialized process-wide.
RunResult run_case(const Binary& binary, const TestCase& test_case, int reps,
                   double timeout_seconds);

bool accuracy(const std::vector<RunResult>& results);  // throws Error on empty

double speedup(double t_o, double t_n, bool correct);  // throws NonpositiveTime
bool opt_flag(double t_o, double t_n, bool correct);   // throws NonpositiveTime

/// Highest sp; ties prefer correct records, then the lowest candidate_id.
EvalRecord best_at_k(const std::vector<EvalRecord>& records);

/// Mean of per-trial summaries; stddevs across trials (0 for a single trial).
MetricsSummary aggregate(const std::vector<std::vector<EvalRecord>>& trials);

}  // namespace eco
