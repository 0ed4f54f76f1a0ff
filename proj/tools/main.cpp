#include <iostream>

#include "hypqg/cli.hpp"

int main(int argc, char** argv) {
  return hypqg::cli::run_cli(argc, argv, std::cout, std::cerr);
}
