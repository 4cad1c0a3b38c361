#include <iostream>
#include <string>
#include <vector>

#include "qtk/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qtk::cli::run(args, std::cout, std::cerr);
}
