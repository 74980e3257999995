#include <iostream>

#include "periodica/cli.hpp"

int main(int argc, char** argv) { return periodica::run_cli(argc, argv, std::cout, std::cerr); }
