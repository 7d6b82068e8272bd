#include "erglab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return erglab::run_cli(argc, argv, std::cout, std::cerr); }
