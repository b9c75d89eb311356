#include <iostream>

#include "epicomp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const epicomp::CliResult r = epicomp::execute(args);
  std::cout << r.out;
  std::cerr << r.err;
  return r.status;
}
