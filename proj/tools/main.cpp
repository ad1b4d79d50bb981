#include <iostream>

#include "thermo_billiards/cli.hpp"

int main(int argc, char **argv) { return tb::run_cli(argc, argv, std::cout, std::cerr); }
