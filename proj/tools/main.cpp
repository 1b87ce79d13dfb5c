#include <iostream>
#include <vector>

#include "mirrorsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mirrorsim::run_cli(args, std::cout, std::cerr);
}
