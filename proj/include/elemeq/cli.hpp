// The elemeq command line: translate, eval, roundtrip, perm-word, catalog and
// selftest behind one entry point, so the tests can drive it in-process.

#ifndef ELEMEQ_CLI_HPP
#define ELEMEQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace elemeq::cli {

// Stable across releases.
enum Exit : int { kOk = 0, kMismatch = 1, kInputError = 2, kRefused = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elemeq::cli

#endif  // ELEMEQ_CLI_HPP
