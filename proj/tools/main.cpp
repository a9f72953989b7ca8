#include <iostream>

#include "semibandit/cli.hpp"

int main(int argc, char** argv) {
  return semibandit::run_cli(argc, argv, std::cout, std::cerr);
}
