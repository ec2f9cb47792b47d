#pragma once

#include <string>

namespace buglens {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // combined stdout + stderr
    bool timed_out = false;
};

/// Runs `shell_command` through /bin/sh -c, capturing combined output. On
/// timeout the whole process group is killed and timed_out is set.
CommandResult run_command(const std::string& shell_command, double timeout_secs);

}  // namespace buglens
