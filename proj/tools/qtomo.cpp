#include <iostream>

#include "qtomo_app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qtomo::app::run_app(std::move(args), std::cin, std::cout, std::cerr);
}
