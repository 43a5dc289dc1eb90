#include <iostream>

#include "peakheight/cli/commands.hpp"

int main(int argc, char** argv) { return peakheight::cli::run_cli(argc, argv, std::cout, std::cerr); }
