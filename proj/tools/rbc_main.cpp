#include <iostream>
#include <string>
#include <vector>

#include "rbc/cli.hpp"

int main(int argc, char** argv) {
  return rbc::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
