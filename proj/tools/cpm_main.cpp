#include <iostream>

#include "cpm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cpm::cli::run(args, std::cout, std::cerr);
}
