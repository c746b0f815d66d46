#include <iostream>

#include "species/cli/args.hpp"

int main(int argc, char** argv) { return species::cli::main_with_args(argc, argv, std::cout, std::cerr); }
