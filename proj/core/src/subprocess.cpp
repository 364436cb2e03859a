#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cerrno>
#include <cstring>

#include "eco/errors.hpp"

namespace eco::internal {

namespace {

void set_nonblocking(int fd) {
    fcntl(fd, F_SETFL, fcntl(fd, F_GETFL, 0) | O_NONBLOCK);
}

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (pipe(fds) != 0) throw Error("pipe failed: " + std::string(strerror(errno)));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fds[0] >= 0) close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) close(fds[1]);
        fds[1] = -1;
    }
};

}  // namespace

RunOutcome run_process(const RunSpec& spec) {
    if (spec.argv.empty()) throw Error("empty command");
    signal(SIGPIPE, SIG_IGN);

    Pipe in, out, err;
    auto t0 = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) throw Error("fork failed: " + std::string(strerror(errno)));
    if (pid == 0) {
        dup2(in.fds[0], STDIN_FILENO);
        dup2(out.fds[1], STDOUT_FILENO);
        dup2(err.fds[1], STDERR_FILENO);
        in.close_write();
        out.close_read();
        err.close_read();
        std::vector<char*> argv;
        for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        _exit(127);
    }

    in.close_read();
    out.close_write();
    err.close_write();
    set_nonblocking(in.fds[1]);
    set_nonblocking(out.fds[0]);
    set_nonblocking(err.fds[0]);

    RunOutcome result;
    size_t written = 0;
    bool stdin_open = true;
    if (spec.stdin_data.empty()) {
        in.close_write();
        stdin_open = false;
    }
    auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(spec.timeout_seconds));

    bool out_open = true, err_open = true;
    while (out_open || err_open || stdin_open) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                .count());
        wait_ms = std::max(1, std::min(wait_ms, 50));

        pollfd fds[3];
        nfds_t n = 0;
        int idx_in = -1, idx_out = -1, idx_err = -1;
        if (stdin_open) {
            idx_in = n;
            fds[n++] = {in.fds[1], POLLOUT, 0};
        }
        if (out_open) {
            idx_out = n;
            fds[n++] = {out.fds[0], POLLIN, 0};
        }
        if (err_open) {
            idx_err = n;
            fds[n++] = {err.fds[0], POLLIN, 0};
        }
        int rc = poll(fds, n, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        char buf[65536];
        if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
                in.close_write();
                stdin_open = false;
            } else {
                ssize_t w = write(in.fds[1], spec.stdin_data.data() + written,
                                  spec.stdin_data.size() - written);
                if (w > 0) written += static_cast<size_t>(w);
                if (w < 0 && errno != EAGAIN && errno != EINTR) {
                    in.close_write();
                    stdin_open = false;
                }
                if (written >= spec.stdin_data.size()) {
                    in.close_write();
                    stdin_open = false;
                }
            }
        }
        auto drain = [&](int fd, std::string& sink, bool& open, Pipe& p) {
            ssize_t r = read(fd, buf, sizeof(buf));
            if (r > 0) {
                if (sink.size() < spec.max_output_bytes)
                    sink.append(buf, std::min<size_t>(
                                          r, spec.max_output_bytes - sink.size()));
            } else if (r == 0 || (r < 0 && errno != EAGAIN && errno != EINTR)) {
                p.close_read();
                open = false;
            }
        };
        if (idx_out >= 0 && (fds[idx_out].revents & (POLLIN | POLLHUP | POLLERR)))
            drain(out.fds[0], result.out, out_open, out);
        if (idx_err >= 0 && (fds[idx_err].revents & (POLLIN | POLLHUP | POLLERR)))
            drain(err.fds[0], result.err, err_open, err);
    }

    int status = 0;
    if (result.timed_out) {
        waitpid(pid, &status, 0);
    } else {
        // Pipes closed; wait for exit, still honoring the deadline.
        while (true) {
            pid_t r = waitpid(pid, &status, WNOHANG);
            if (r == pid) break;
            if (std::chrono::steady_clock::now() >= deadline) {
                result.timed_out = true;
                kill(pid, SIGKILL);
                waitpid(pid, &status, 0);
                break;
            }
            usleep(1000);
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) {
        result.signaled = true;
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

}  // namespace eco::internal
