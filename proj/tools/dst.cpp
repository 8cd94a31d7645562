#include <iostream>
#include <string>
#include <vector>

#include "dst/bench.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dst::run_cli(args, std::cout, std::cerr);
}
