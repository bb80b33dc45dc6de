#include <vector>
#include <string>

#include "specgate/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return specgate::run_cli(args);
}
