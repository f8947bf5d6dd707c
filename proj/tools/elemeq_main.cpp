#include <iostream>

#include "elemeq/cli.hpp"

int main(int argc, char** argv) {
  return elemeq::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
