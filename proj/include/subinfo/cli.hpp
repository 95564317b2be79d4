#pragma once

// Command-line front end: convert, encode, infer, rank, analyze, synth and
// stats. Data goes to files (or standard output for "-"), diagnostics to the
// error stream. The return value is the process exit status: 0 success,
// 2 usage, 3 parse, 4 numeric or convergence failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace subinfo::cli {

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subinfo::cli
