#include <iostream>
#include <string>
#include <vector>

#include "nap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nap::run_cli(args, std::cout, std::cerr);
}
