#include <iostream>

#include "pathpol/cli.hpp"

int main(int argc, char** argv) {
  return pathpol::cli::run(argc, argv, std::cout, std::cerr);
}
