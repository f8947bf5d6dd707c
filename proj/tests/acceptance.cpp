// One line per acceptance criterion; notes indented below.  Optional
// arguments select criteria by id.
#include <iostream>
#include <string>
#include <vector>

#include "elemeq/suites.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> ids(argv + 1, argv + argc);
  if (ids.empty()) ids = elemeq::suite_ids();
  int failed = 0;
  for (const auto& id : ids) {
    elemeq::SuiteResult r;
    try {
      r = elemeq::run_suite(id);
    } catch (const std::exception& e) {
      std::cout << "FAIL " << id << ": " << e.what() << std::endl;
      ++failed;
      continue;
    }
    std::cout << elemeq::summary_line(r) << "\n";
    for (const auto& n : r.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    failed += !r.passed();
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << ids.size() - static_cast<std::size_t>(failed) << "/"
            << ids.size() << std::endl;
  return failed ? 1 : 0;
}
