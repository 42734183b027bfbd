#include <iostream>

#include "mgmapf_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mgmapf::tools::run_cli(args, std::cout, std::cerr);
}
