#pragma once

#include <string>
#include <vector>

namespace agora {

// Full command-line surface (generate | estimate-dim | diagnose | plot).
// Returns the process exit code: 0 success, 1 validation/usage error,
// 2 runtime error. Exposed as a function so tests can drive it in-process.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace agora
