#include <iostream>

#include "kinlim/cli.hpp"

int main(int argc, char** argv) { return kinlim::run_cli(argc, argv, std::cout, std::cerr); }
