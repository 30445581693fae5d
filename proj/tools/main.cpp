#include <iostream>
#include <string>
#include <vector>

#include "shapeeval/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shapeeval::RunCli(args, std::cout, std::cerr);
}
