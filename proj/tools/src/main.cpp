#include <iostream>

#include "cgsim/cli/commands.hpp"

int main(int argc, char** argv) {
  return cgsim::cli::run(argc, argv, std::cout, std::cerr);
}
