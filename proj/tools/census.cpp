#include <string>
#include <vector>

#include "census/cli.hpp"

int main(int argc, char** argv) {
  return census::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
