#include <iostream>
#include <string>
#include <vector>

#include "cgpl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cgpl::run_cli(args, std::cout, std::cerr);
}
