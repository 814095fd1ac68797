#include <iostream>

#include "qtm/cli/commands.hpp"

int main(int argc, char** argv) { return qtm::cli::run_command(argc, argv, std::cout, std::cerr); }
