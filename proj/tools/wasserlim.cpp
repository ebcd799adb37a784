#include <iostream>
#include <string>
#include <vector>

#include "wasserlim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wasserlim::cli::main_entry(args, std::cout, std::cerr);
}
