#pragma once

#include <iosfwd>

namespace gale {

/// Exit codes: 0 success or pass, 1 violation found, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gale
