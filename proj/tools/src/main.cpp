#include <bellsim/cli/app.hpp>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bellsim::cli::run(args, std::cout, std::cerr);
}
