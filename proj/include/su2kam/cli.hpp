#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kam {

/// Exit codes: 0 PASS, 1 FAIL, 2 usage or configuration error.
enum ExitCode { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

/// `args` excludes the program name.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kam
