#include <string>
#include <vector>

#include "surf_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return harmsurf::cli::run(args);
}
