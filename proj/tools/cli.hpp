// Command-line front end; run() is callable in-process for tests.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gdg::cli {

// Exit status: 0 success, 1 report-level failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gdg::cli
