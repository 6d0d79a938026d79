#include <iostream>

#include "sobolev/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sobolev::cli::execute(args, std::cout, std::cerr);
}
