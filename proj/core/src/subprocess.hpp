#pragma once

#include <string>
#include <vector>

namespace eco::internal {

struct RunSpec {
    std::vector<std::string> argv;
    std::string stdin_data;
    double timeout_seconds = 2.0;
    size_t max_output_bytes = 8 * 1024 * 1024;
};

struct RunOutcome {
    int exit_code = -1;
    bool timed_out = false;
    bool signaled = false;
    std::string out;
    std::string err;
    double wall_seconds = 0.0;
};

/// Run a child process with piped stdin/stdout/stderr, a wall-clock deadline,
/// and an output size cap. Never throws for child failures; throws Error only
/// when the process cannot be spawned.
RunOutcome run_process(const RunSpec& spec);

}  // namespace eco::internal
