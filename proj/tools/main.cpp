#include <iostream>

#include "polyrep/cli.hpp"

int main(int argc, char** argv) { return polyrep::cli::main_entry(argc, argv, std::cout, std::cerr); }
