#include "buglens/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "buglens/errors.hpp"

namespace buglens {

namespace {

using Clock = std::chrono::steady_clock;

int wait_for_exit(pid_t pid) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            return -1;
        }
    }
    if (WIFEXITED(status)) {
        return WEXITSTATUS(status);
    }
    if (WIFSIGNALED(status)) {
        return 128 + WTERMSIG(status);
    }
    return -1;
}

}  // namespace

CommandResult run_command(const std::string& shell_command, double timeout_secs) {
    int pipefd[2];
    if (pipe(pipefd) != 0) {
        throw Error(std::string("pipe: ") + std::strerror(errno));
    }

    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw Error(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        // Child: own process group so a timeout can kill the whole tree.
        setpgid(0, 0);
        close(pipefd[0]);
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[1]);
        execl("/bin/sh", "sh", "-c", shell_command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    close(pipefd[1]);
    CommandResult result;
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(timeout_secs));
    char buf[4096];
    bool open = true;
    while (open) {
        auto remaining = deadline - Clock::now();
        if (remaining <= Clock::duration::zero()) {
            result.timed_out = true;
            break;
        }
        int remaining_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count());
        struct pollfd pfd{pipefd[0], POLLIN, 0};
        int ready = poll(&pfd, 1, remaining_ms > 0 ? remaining_ms : 1);
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (ready == 0) {
            result.timed_out = true;
            break;
        }
        ssize_t n = read(pipefd[0], buf, sizeof(buf));
        if (n > 0) {
            result.output.append(buf, static_cast<std::size_t>(n));
        } else {
            open = false;  // EOF or error
        }
    }
    close(pipefd[0]);

    if (result.timed_out) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
    }
    result.exit_code = wait_for_exit(pid);
    return result;
}

}  // namespace buglens
