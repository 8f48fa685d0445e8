#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybridex {

/// Subcommands gen-corpus, run and report. Exit status 0 on success, 2 on
/// bad flags, 1 on I/O, parse or validation errors.
int cli_main(int argc, char** argv);

/// Same, with `args[0]` as the program name and explicit streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybridex
