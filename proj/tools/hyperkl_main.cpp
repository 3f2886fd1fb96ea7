#include <iostream>
#include <string>
#include <vector>

#include "hyperkl/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hyperkl::run_cli(args, std::cout, std::cerr);
}
