#include <iostream>

#include "kgframe/cli/commands.hpp"

int main(int argc, char** argv) { return kgframe::run_cli(argc, argv, std::cout, std::cerr); }
