#include <string>
#include <vector>

#include "vqs/cli.hpp"

int main(int argc, char** argv) {
  return vqs::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
