#include <iostream>

#include "dncone/cli.hpp"

int main(int argc, char** argv) {
  return dncone::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
