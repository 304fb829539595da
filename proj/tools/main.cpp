#include "cubic/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cubic::cli::run_cli(argc, argv, std::cout, std::cerr); }
