#include <iostream>
#include <string>
#include <vector>

#include "perclab/cli.hpp"

int main(int argc, char** argv) {
  return perclab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
