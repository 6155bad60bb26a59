#pragma once

// Command-line front end. Exit codes: 0 success or all properties passed,
// 1 a property failed, 2 usage, configuration or input error, 3 internal
// error.

#include <iosfwd>

namespace ndual {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ndual
