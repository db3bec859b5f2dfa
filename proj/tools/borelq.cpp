#include <iostream>
#include <string>
#include <vector>

#include "borelq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return borelq::cli::run(args, std::cout, std::cerr);
}
