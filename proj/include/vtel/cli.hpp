#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace vtel {

enum ExitCode { kOk = 0, kInvalid = 1, kNumerical = 2, kStatFail = 3 };

// args excludes the program name; results go to out unless --out is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace vtel
