#include <iostream>

#include "cqlad/cli.hpp"

int main(int argc, char** argv) {
  return cqlad::cli::run(argc, argv, std::cout, std::cerr);
}
