#include <iostream>

#include "su2kam/cli.hpp"

int main(int argc, char** argv) {
  return kam::cli_run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
