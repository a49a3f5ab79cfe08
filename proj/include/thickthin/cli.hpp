#pragma once

#include <string>
#include <vector>

namespace thickthin {

// Full command-line entry point (subcommands: plan, verify, render, probe).
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or
// config error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace thickthin
