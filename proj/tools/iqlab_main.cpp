#include <string>
#include <vector>

#include "iqlab/cli.hpp"

int main(int argc, char** argv) {
  return iqlab::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
