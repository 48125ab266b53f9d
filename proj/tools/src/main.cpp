#include <iostream>

#include "cdo/cli/report.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cdo::cli::run_cli(args, std::cout, std::cerr);
}
