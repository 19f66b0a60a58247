#include <iostream>
#include <string>
#include <vector>

#include "conjlab/cli.hpp"

int main(int argc, char** argv) {
  return conjlab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
