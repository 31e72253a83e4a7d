#include <iostream>
#include <string>
#include <vector>

#include "reprank/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return reprank::run_cli(args, std::cout, std::cerr);
}
