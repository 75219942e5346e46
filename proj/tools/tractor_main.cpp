#include "tractor/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return tractor::cli::run(argc, argv, std::cout, std::cerr); }
