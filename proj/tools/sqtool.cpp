#include "sqt/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return sqt::run_cli(argc, argv, std::cout, std::cerr); }
