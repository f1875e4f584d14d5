#include <iostream>
#include <string>
#include <vector>

#include "sflopt/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return sflopt::run_command(args, std::cout, std::cerr);
}
