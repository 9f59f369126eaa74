#include <iostream>
#include <string>
#include <vector>

#include "infogain/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return infogain::run_cli(args, std::cout, std::cerr);
}
