#include <iostream>

#include "mssp/cli/commands.hpp"

int main(int argc, char** argv) { return mssp::cli::run_cli(argc, argv, std::cout, std::cerr); }
