#include <iostream>

#include "kmu/cli.hpp"

int main(int argc, char** argv) { return kmu::cli::run_cli(argc, argv, std::cout, std::cerr); }
