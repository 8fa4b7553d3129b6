#include <iostream>

#include "syslab/cli.hpp"

int main(int argc, char** argv) {
  return syslab::run_cli(argc, argv, std::cout, std::cerr);
}
