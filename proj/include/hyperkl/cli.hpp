#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperkl {

/// Command-line front end. Returns the process exit code:
///   0  success
///   1  domain failure (axiom violation, failed assertion, no convergence)
///   2  input error (unreadable file, malformed document, bad arguments)
///   3  resource budget exceeded (support cap)
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperkl
