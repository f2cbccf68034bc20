#include <iostream>

#include "hornfolio/cli/cli.hpp"

int main(int argc, char** argv) {
  return hornfolio::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
