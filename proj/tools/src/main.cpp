#include <iostream>

#include "curvetrace/cli.hpp"

int main(int argc, char** argv) {
  return curvetrace::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
