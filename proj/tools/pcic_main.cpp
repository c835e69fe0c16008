#include <iostream>
#include <string>
#include <vector>

#include "pcic/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pcic::cli::run(args, std::cout, std::cerr);
}
