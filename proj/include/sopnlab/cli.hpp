#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sopnlab {

// Runs one command line (argv without the program name). The report goes to
// out, diagnostics to err. Returns 0 for a verified positive outcome, 1 for a
// verified negative one (violation, obstruction, refutation, incompleteness,
// recheck disagreement), 2 for usage or input errors. Reports are
// deterministic: they embed every input in canonical text form together with
// the command and parameters, so the recheck command can re-run them offline.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sopnlab
