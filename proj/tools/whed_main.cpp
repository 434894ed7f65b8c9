#include "whed/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return whed::cli::run(argc, argv, std::cout, std::cerr); }
