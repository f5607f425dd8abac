#include <iostream>
#include <string>
#include <vector>

#include "edgeseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return edgeseg::cli::run(args, std::cout, std::cerr);
}
