#include <iostream>

#include "hwgrowth/cli.hpp"

int main(int argc, char** argv) {
  return hwgrowth::cli::main_entry(argc, argv, std::cout, std::cerr);
}
