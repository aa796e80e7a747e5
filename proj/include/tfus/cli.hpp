#pragma once

#include <string>
#include <vector>

namespace tfus::cli {

// Batch front door. Subcommands: synth, extract, pca, train, cv, assess,
// report. Returns the process exit code: 0 ok, 2 config error, 3 data error,
// 4 numerical failure.
int run(const std::vector<std::string>& args);

} // namespace tfus::cli
