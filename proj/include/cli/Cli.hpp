#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cli {

/// Entry point of the `qdd` command line tool. `args` excludes the program
/// name. Returns the process exit code.
///
///   qdd simulate (--simulate_file F | --simulate_grover N | --simulate_qft N)
///                [--shots S] [--seed S] [--ps]
///   qdd check F1 F2 [--strategy S] [--stimuli-count K] [--global-phase] [--seed S]
///   qdd dot F [--style classic|colored] [--functionality] [--seed S] [-o OUT]
///   qdd serve [--host H] [--port P] [--dense-threshold N] [--ttl SECONDS]
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cli
