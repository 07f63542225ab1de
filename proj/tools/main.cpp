#include <iostream>
#include <string>
#include <vector>

#include "evanescent/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return evanescent::cli::run(args, std::cout, std::cerr);
}
