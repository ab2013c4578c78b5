// Runs the bellkit CLI found via the BELLKIT_CLI environment variable and
// captures stdout plus the exit status.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <sys/wait.h>

namespace cli_test {

struct CommandResult {
    int status = -1;
    std::string output;
};

inline std::string cli_path() {
    const char* p = std::getenv("BELLKIT_CLI");
    if (p == nullptr || *p == '\0')
        throw std::runtime_error("BELLKIT_CLI is not set; run through ctest");
    return p;
}

// args is appended verbatim; callers may include shell redirects.
inline CommandResult run_cli(const std::string& args) {
    const std::string cmd = "'" + cli_path() + "' " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) throw std::runtime_error("popen failed for: " + cmd);
    CommandResult r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

}  // namespace cli_test
