#include <iostream>

#include "relcomp/cli.hpp"

int main(int argc, char** argv) { return relcomp::run_cli(argc, argv, std::cout, std::cerr); }
