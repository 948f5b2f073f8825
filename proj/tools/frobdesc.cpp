#include <iostream>
#include <string>
#include <vector>

#include "frobdesc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return frobdesc::run_cli(args, std::cout, std::cerr);
}
