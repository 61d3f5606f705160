#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return v2x::cli::run_cli(argc, argv, std::cout, std::cerr); }
