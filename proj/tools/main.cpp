#include <iostream>
#include <string>
#include <vector>

#include "annealed_ising/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aising::cli::run(args, std::cout, std::cerr);
}
