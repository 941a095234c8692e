#pragma once

#include <iosfwd>

namespace ruledrel::cli {

/// ruledrel eval|classify|image|fields|mesh|verify --spec FILE [--out FILE] [--depth N]
/// Returns the process exit code (see ExitCode).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ruledrel::cli
