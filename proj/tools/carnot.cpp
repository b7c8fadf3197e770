#include <iostream>
#include <string>
#include <vector>

#include "carnot/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return carnot::run_cli(args, std::cout, std::cerr);
}
