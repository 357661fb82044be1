#include <vector>
#include <string>

#include "lawless/cli_runner.hpp"

int main(int argc, char** argv) {
  return lawless::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
