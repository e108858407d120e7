#include <string>
#include <vector>

#include "testfn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return testfn::cli::run_cli(args);
}
